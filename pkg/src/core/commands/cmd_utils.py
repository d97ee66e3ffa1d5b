import argparse
import sys

from pathlib import Path
from typing import Any, Dict, FrozenSet, Iterable, List, Optional, Tuple

import ujson as json

from core.globals import VERSION
from core.commands.cmd_abstract import UsageError
from core.sweeps.s_persist import write_metadata


__all__ = [
    "FORMATS",
    "parse_formats",
    "parse_override",
    "parse_float_list",
    "set_path",
    "load_config_file",
    "resolve_config",
    "add_run_arguments",
    "run_flag_values",
    "write_run_metadata",
    "emit",
]


FORMATS = ("csv", "json", "svg")
DATA_MODES = ("hmm-sequence", "iid-gaussian", "direct-linear")


def parse_formats(value: str) -> FrozenSet[str]:
    """'csv,svg' -> {'csv', 'svg'}; argparse type for --format."""
    formats = frozenset(part.strip() for part in value.split(",") if part.strip())
    unknown = sorted(formats - set(FORMATS))
    if not formats or unknown:
        raise argparse.ArgumentTypeError(f"formats must be a comma list of {','.join(FORMATS)}, got '{value}'")
    return formats


def parse_override(value: str) -> Tuple[str, Any]:
    """'key=value' with a dotted key; the value is read as JSON when it parses, else kept as a string."""
    key, sep, raw = value.partition("=")
    key = key.strip()
    if not sep or not key or any(not part for part in key.split(".")):
        raise argparse.ArgumentTypeError(f"override must look like key=value, got '{value}'")
    try:
        parsed = json.loads(raw)
    except ValueError:
        parsed = raw
    return key, parsed


def parse_float_list(value: str) -> List[float]:
    try:
        return [float(part) for part in value.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma list of numbers, got '{value}'")


def set_path(doc: Dict[str, Any], key: str, value: Any) -> None:
    """doc['a']['b'] = value for key 'a.b', creating intermediate objects."""
    *parents, leaf = key.split(".")
    node = doc
    for part in parents:
        child = node.get(part)
        if child is None:
            child = node[part] = {}
        elif not isinstance(child, dict):
            raise UsageError(f"override '{key}': '{part}' is not an object")
        node = child
    node[leaf] = value


def load_config_file(path: Path) -> Dict[str, Any]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise OSError(f"cannot read config {path}: {e}") from e
    try:
        doc = json.loads(text)
    except ValueError as e:
        raise UsageError(f"config {path} is not valid JSON: {e}") from e
    if not isinstance(doc, dict):
        raise UsageError(f"config {path} must hold a JSON object")
    return doc


def resolve_config(
        base: Dict[str, Any],
        config_path: Optional[Path],
        flags: Dict[str, Any],
        overrides: Iterable[Tuple[str, Any]]
) -> Dict[str, Any]:
    """Merge layers in increasing precedence: base < config file < flags < --set overrides.

    Top-level keys replace whole values; dotted keys in flags and overrides
    reach into nested objects.
    """
    doc = dict(base)
    if config_path is not None:
        doc.update(load_config_file(config_path))
    for key, value in flags.items():
        if value is not None:
            set_path(doc, key, value)
    for key, value in overrides or ():
        set_path(doc, key, value)
    return doc


def add_run_arguments(parser: argparse.ArgumentParser) -> None:
    """Flags shared by every command that fits estimators to drawn data."""
    parser.add_argument("--trials", type=int, help="fresh-noise Monte Carlo trials per design (< 2 disables)")
    parser.add_argument("--redraws", type=int, help="independent designs per grid point")
    parser.add_argument("--mode", choices=DATA_MODES, help="how training data is drawn")
    parser.add_argument("--lambda", dest="lam", type=float, help="ridge penalty; selects the ridge estimator")
    parser.add_argument("--workers", type=int, help="grid points evaluated concurrently")


def run_flag_values(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        "seed": args.seed,
        "trials": args.trials,
        "x_redraws": args.redraws,
        "data_mode": args.mode,
        "estimator": {"kind": "ridge", "lam": args.lam} if args.lam is not None else None,
        "workers": args.workers,
    }


def write_run_metadata(out: Path, command: str, config: Dict[str, Any], seed: int, **extra: Any) -> Path:
    """metadata.json echoing the resolved config and seed."""
    path = Path(out) / "metadata.json"
    write_metadata(
        {
            "command": command,
            "version": VERSION,
            "seed": seed,
            "config": config,
            **extra,
        },
        path,
    )
    return path


def emit(line: str = "") -> None:
    """Command results go to stdout; logs go to stderr."""
    sys.stdout.write(f"{line}\n")
