import csv

from pathlib import Path
from typing import Tuple

import numpy as np
import ujson as json

from hmm_model.population import RegressionPair
from hmm_model.sampling import Dataset


__all__ = [
    "write_population_model",
    "write_dataset_csv",
    "read_dataset_csv",
    "write_dataset_json",
    "read_dataset_json",
]


DATASET_CSV_HEADER = ["row", "kind", "col", "value"]


def _prepare(path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def write_population_model(model: RegressionPair, path: Path) -> None:
    """All matrices of the model as row-major nested lists."""
    with _prepare(path).open("w") as f:
        f.write(json.dumps(model.to_dict(), indent=2))


def write_dataset_csv(dataset: Dataset, path: Path) -> None:
    """Long format: one line per entry, kind 'x' or 'y'."""
    with _prepare(path).open("w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(DATASET_CSV_HEADER)
        for kind, block in (("x", dataset.X), ("y", dataset.Y)):
            for (row, col), value in np.ndenumerate(block):
                writer.writerow([row, kind, col, repr(float(value))])


def read_dataset_csv(path: Path) -> Tuple[np.ndarray, np.ndarray]:
    entries = {"x": {}, "y": {}}
    with Path(path).open("r", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != DATASET_CSV_HEADER:
            raise ValueError(f"{path}: expected header {','.join(DATASET_CSV_HEADER)}, got {reader.fieldnames}")
        for line in reader:
            entries[line["kind"]][(int(line["row"]), int(line["col"]))] = float(line["value"])

    def _assemble(cells) -> np.ndarray:
        rows = 1 + max(r for r, _ in cells)
        cols = 1 + max(c for _, c in cells)
        out = np.empty((rows, cols))
        for (r, c), value in cells.items():
            out[r, c] = value
        return out

    return _assemble(entries["x"]), _assemble(entries["y"])


def write_dataset_json(dataset: Dataset, path: Path) -> None:
    with _prepare(path).open("w") as f:
        f.write(json.dumps(dataset.to_dict()))


def read_dataset_json(path: Path) -> Dataset:
    with Path(path).open("r") as f:
        doc = json.loads(f.read())
    X = np.asarray(doc["X"], dtype=float).reshape(doc["n"], doc["p"])
    Y = np.asarray(doc["Y"], dtype=float).reshape(doc["n"], doc["d"])
    return Dataset(X=X, Y=Y, mode=doc["mode"], seed=int(doc["seed"]))
