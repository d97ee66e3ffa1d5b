import csv

from pathlib import Path
from typing import Any, Dict

import ujson as json

from asymptotics.curve import format_cell, parse_float
from core.sweeps.s_models import SweepResult, SweepRow, ROW_FIELDS


__all__ = ["write_csv", "read_csv", "write_json", "read_json", "write_metadata"]


INT_FIELDS = {"n", "p"}
STR_FIELDS = {"threshold_tag"}


def _prepare(path: Path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OSError(f"cannot create directory for {path}: {e}") from e
    return path


def write_csv(result: SweepResult, path: Path) -> None:
    """One line per row in ROW_FIELDS order; blank for missing values, 'inf' for +∞."""
    path = _prepare(path)
    try:
        with path.open("w", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(ROW_FIELDS)
            for row in result.sorted_rows():
                writer.writerow([format_cell(getattr(row, name)) for name in ROW_FIELDS])
    except OSError as e:
        raise OSError(f"cannot write {path}: {e}") from e


def _parse_cell(name: str, cell: str) -> Any:
    if name in STR_FIELDS:
        return cell
    if name in INT_FIELDS:
        return int(cell)
    return parse_float(cell)


def read_csv(path: Path) -> SweepResult:
    """Rows only; metadata lives in the JSON form."""
    with Path(path).open("r", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != ROW_FIELDS:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        rows = [SweepRow(**{name: _parse_cell(name, line[name]) for name in ROW_FIELDS}) for line in reader]
    return SweepResult(rows=rows)


def write_json(result: SweepResult, path: Path) -> None:
    path = _prepare(path)
    doc = {
        "rows": [row.to_json_dict() for row in result.sorted_rows()],
        "metadata": result.metadata,
    }
    try:
        with path.open("w") as f:
            f.write(json.dumps(doc, indent=2))
    except OSError as e:
        raise OSError(f"cannot write {path}: {e}") from e


def read_json(path: Path) -> SweepResult:
    with Path(path).open("r") as f:
        return SweepResult.model_validate(json.loads(f.read()))


def write_metadata(metadata: Dict[str, Any], path: Path) -> None:
    path = _prepare(path)
    try:
        with path.open("w") as f:
            f.write(json.dumps(metadata, indent=2))
    except OSError as e:
        raise OSError(f"cannot write {path}: {e}") from e
