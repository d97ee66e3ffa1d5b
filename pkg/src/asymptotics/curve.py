import csv
import math

from pathlib import Path
from typing import Any, Iterable, List, Literal, Optional, Union

import ujson as json

from pydantic import BaseModel, ConfigDict, model_validator

from core.logger import debug
from asymptotics.context import SpectrumContext
from asymptotics.fixed_point import solve_c0
from asymptotics.functionals import (
    asymptotic_bias,
    asymptotic_variance,
    underparam_risk,
    ridge_asymptotic_bias,
    ridge_asymptotic_variance,
)
from hmm_model.population import RegressionPair


__all__ = [
    "THRESHOLD_BAND",
    "CurveRow",
    "format_cell",
    "parse_float",
    "theoretical_risk_curve",
    "write_curve_csv",
    "read_curve_csv",
    "write_curve_json",
    "read_curve_json",
]


THRESHOLD_BAND = 1e-3
CURVE_CSV_HEADER = ["gamma", "bias", "variance", "risk", "tag"]


class CurveRow(BaseModel):
    model_config = ConfigDict(frozen=True)

    gamma: float
    bias: Optional[float] = None
    variance: Optional[float] = None
    risk: Optional[float] = None
    tag: Literal["", "threshold"] = ""
    c0: Optional[float] = None

    @model_validator(mode="before")
    @classmethod
    def _restore_infinity(cls, data: Any) -> Any:
        # JSON carries the threshold marker as a null risk
        if isinstance(data, dict) and data.get("tag") == "threshold" and data.get("risk") is None:
            return {**data, "risk": math.inf}
        return data

    @property
    def is_threshold(self) -> bool:
        return self.tag == "threshold"

    def to_json_dict(self) -> dict:
        doc = self.model_dump(mode="python")
        if self.is_threshold:
            doc["risk"] = None
        return doc


def _context_for(source: Union[RegressionPair, SpectrumContext]) -> SpectrumContext:
    if isinstance(source, SpectrumContext):
        return source
    return SpectrumContext.from_pair(source, source.p)


def theoretical_risk_curve(
        source: Union[RegressionPair, SpectrumContext],
        gamma_grid: Iterable[float],
        lam: Optional[float] = None,
        threshold_band: float = THRESHOLD_BAND
) -> List[CurveRow]:
    """Deterministic (γ, bias, variance, risk) rows.

    Without `lam`: γ < 1 uses zero bias and variance Tr(Σ_ε)·γ/(1 − γ);
    γ > 1 uses the c₀ functionals; γ within `threshold_band` of 1 is tagged
    "threshold" with infinite risk. With `lam`, every γ uses the ridge
    functionals and nothing is tagged.
    """
    base = _context_for(source)
    rows = []
    for gamma in gamma_grid:
        gamma = float(gamma)
        if not gamma > 0:
            raise ValueError(f"gamma grid values must be > 0, got {gamma}")
        ctx = base.with_gamma(gamma)

        if lam is not None:
            bias = ridge_asymptotic_bias(lam, ctx)
            variance = ridge_asymptotic_variance(lam, ctx)
            rows.append(CurveRow(gamma=gamma, bias=bias, variance=variance, risk=bias + variance))
        elif abs(gamma - 1.0) < threshold_band:
            rows.append(CurveRow(gamma=gamma, risk=math.inf, tag="threshold"))
        elif gamma < 1:
            variance = underparam_risk(gamma, ctx.trace_sigma_eps)
            rows.append(CurveRow(gamma=gamma, bias=0.0, variance=variance, risk=variance))
        else:
            c0 = solve_c0(ctx)
            bias = asymptotic_bias(ctx, c0)
            variance = asymptotic_variance(ctx, c0)
            rows.append(CurveRow(gamma=gamma, bias=bias, variance=variance, risk=bias + variance, c0=c0.value))

    debug(f"theory curve: {len(rows)} rows, lambda={lam}")
    return rows


def format_cell(value: Any) -> str:
    """CSV cell: shortest round-trip float, blank for None, 'inf' for +∞."""
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    return str(value)


def parse_float(cell: str) -> Optional[float]:
    return None if cell == "" else float(cell)


def write_curve_csv(rows: List[CurveRow], path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CURVE_CSV_HEADER)
        for row in rows:
            writer.writerow([format_cell(getattr(row, name)) for name in CURVE_CSV_HEADER])


def read_curve_csv(path: Path) -> List[CurveRow]:
    with Path(path).open("r", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != CURVE_CSV_HEADER:
            raise ValueError(f"{path}: expected header {','.join(CURVE_CSV_HEADER)}, got {reader.fieldnames}")
        return [
            CurveRow(
                gamma=float(line["gamma"]),
                bias=parse_float(line["bias"]),
                variance=parse_float(line["variance"]),
                risk=parse_float(line["risk"]),
                tag=line["tag"],
            )
            for line in reader
        ]


def write_curve_json(rows: List[CurveRow], path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as f:
        f.write(json.dumps({"rows": [row.to_json_dict() for row in rows]}, indent=2))


def read_curve_json(path: Path) -> List[CurveRow]:
    with Path(path).open("r") as f:
        doc = json.loads(f.read())
    return [CurveRow.model_validate(row) for row in doc["rows"]]
