from dataclasses import dataclass, field
from typing import Dict, Any, Literal, Optional

import numpy as np

from pydantic import BaseModel, ConfigDict, Field, AliasChoices, model_validator


__all__ = ["FitResult", "RiskMethod", "RiskReport", "EstimatorSpec"]


RiskMethod = Literal["exact-conditional", "monte-carlo", "plug-in"]


@dataclass(frozen=True, eq=False)
class FitResult:
    Bhat: np.ndarray = field(repr=False)
    rank: int
    lam: float
    svd_cutoff: float

    @property
    def ridgeless(self) -> bool:
        return self.lam == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "Bhat": self.Bhat.tolist(),
            "rank": self.rank,
            "lambda": self.lam,
            "svd_cutoff": self.svd_cutoff,
        }


class EstimatorSpec(BaseModel):
    """min-norm (ridgeless least squares) or ridge with penalty `lam`."""
    model_config = ConfigDict(extra="forbid", frozen=True, populate_by_name=True)

    kind: Literal["min-norm", "ridge"] = "min-norm"
    lam: Optional[float] = Field(
        None,
        gt=0,
        validation_alias=AliasChoices("lam", "lambda"),
        description="Ridge penalty; required for ridge, absent for min-norm",
    )

    @model_validator(mode="after")
    def _check_lam(self) -> "EstimatorSpec":
        if self.kind == "ridge" and self.lam is None:
            raise ValueError("ridge estimator requires lam > 0")
        if self.kind == "min-norm" and self.lam is not None:
            raise ValueError("min-norm estimator takes no lam")
        return self

    @classmethod
    def min_norm(cls) -> "EstimatorSpec":
        return cls(kind="min-norm")

    @classmethod
    def ridge(cls, lam: float) -> "EstimatorSpec":
        return cls(kind="ridge", lam=lam)

    @property
    def label(self) -> str:
        return self.kind if self.lam is None else f"ridge(lambda={self.lam:g})"


class RiskReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    bias: float = Field(..., ge=0)
    variance: float = Field(..., ge=0)
    risk: float = Field(..., ge=0)
    method: RiskMethod
    stderr: float = Field(0.0, ge=0, description="Standard error of risk; 0 for exact methods")
    trials: Optional[int] = Field(None, ge=2, description="Monte Carlo trials")
    bias_stderr: float = Field(0.0, ge=0)
    variance_stderr: float = Field(0.0, ge=0)

    @model_validator(mode="after")
    def _check_method(self) -> "RiskReport":
        if self.method == "monte-carlo":
            if self.trials is None:
                raise ValueError("monte-carlo report requires trials")
            return self
        if self.stderr or self.bias_stderr or self.variance_stderr:
            raise ValueError(f"{self.method} report carries no standard errors")
        if self.method == "exact-conditional" and abs(self.risk - (self.bias + self.variance)) > 1e-10 * max(1.0, self.risk):
            raise ValueError("exact-conditional risk must equal bias + variance")
        return self
