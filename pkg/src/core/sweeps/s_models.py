import math

from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from estimators.models import EstimatorSpec
from hmm_model.spec import DataMode, ModelSpec


__all__ = ["SweepConfig", "SweepRow", "SweepResult", "ROW_FIELDS", "RowTag"]


RowTag = Literal["", "threshold", "error"]

# fields a sweep supplies to each hmm-mode ModelSpec itself
TEMPLATE_RESERVED = ("d", "p", "sigma_xi2")


class SweepConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str = Field("custom", description="Preset or run name echoed in metadata")
    d: int = Field(..., ge=1, description="Token dimension")
    p_grid: List[int] = Field(..., min_length=1, description="Representation sizes, strictly increasing")
    n_values: List[int] = Field(..., min_length=1, description="Training sample sizes")
    noise_levels: List[float] = Field(..., min_length=1, description="Sigma_eps scalar (direct-linear) or sigma_xi2 (hmm modes)")
    data_mode: DataMode = "direct-linear"
    trials: int = Field(1, ge=1, description="Fresh-noise Monte Carlo trials per design; < 2 disables Monte Carlo")
    x_redraws: int = Field(5, ge=1, description="Independent designs per grid point")
    estimator: EstimatorSpec = Field(default_factory=EstimatorSpec)
    seed: int = Field(0, ge=0, lt=2 ** 64)
    b_recipe: Literal["gaussian-unit", "zero"] = Field("gaussian-unit", description="B for direct-linear mode")
    sigma_x_recipe: Literal["identity", "uniform-spectrum"] = "identity"
    spectrum_low: float = Field(0.5, gt=0)
    spectrum_high: float = Field(3.0, gt=0)
    model_template: Dict[str, Any] = Field(default_factory=dict, description="ModelSpec fields for hmm modes")
    workers: int = Field(1, ge=1, description="Grid points evaluated concurrently")
    assumption_m: float = Field(100.0, gt=0, description="Bound M for the regularity diagnostics")

    @field_validator("p_grid")
    @classmethod
    def _check_p_grid(cls, v: List[int]) -> List[int]:
        if any(p < 1 for p in v):
            raise ValueError("p_grid values must be positive")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError("p_grid must be strictly increasing")
        return v

    @field_validator("n_values")
    @classmethod
    def _check_n_values(cls, v: List[int]) -> List[int]:
        if any(n < 1 for n in v):
            raise ValueError("n_values must be positive")
        return v

    @field_validator("noise_levels")
    @classmethod
    def _check_noise(cls, v: List[float]) -> List[float]:
        if any(not level > 0 for level in v):
            raise ValueError("noise_levels must be positive")
        return v

    @model_validator(mode="after")
    def _check_consistency(self) -> "SweepConfig":
        if self.spectrum_low > self.spectrum_high:
            raise ValueError("spectrum_low must not exceed spectrum_high")
        reserved = [k for k in TEMPLATE_RESERVED if k in self.model_template]
        if reserved:
            raise ValueError(f"model_template must not set {reserved}; the sweep supplies them")
        if self.data_mode != "direct-linear":
            self.model_spec(self.p_grid[0], self.noise_levels[0])
        return self

    def model_spec(self, p: int, noise_level: float) -> ModelSpec:
        return ModelSpec(**{"seed": self.seed, **self.model_template, "d": self.d, "p": p, "sigma_xi2": noise_level})


class SweepRow(BaseModel):
    """One (n, p, noise level) grid point. Field order is the CSV column order."""
    model_config = ConfigDict(frozen=True)

    n: int
    p: int
    gamma: float
    noise_level: float
    emp_bias_mean: Optional[float] = None
    emp_bias_se: Optional[float] = None
    emp_var_mean: Optional[float] = None
    emp_var_se: Optional[float] = None
    emp_risk_mean: Optional[float] = None
    emp_risk_se: Optional[float] = None
    theory_bias: Optional[float] = None
    theory_variance: Optional[float] = None
    theory_risk: Optional[float] = None
    c0_or_blank: Optional[float] = None
    threshold_tag: RowTag = ""
    mc_risk_mean: Optional[float] = None
    mc_risk_se: Optional[float] = None
    cond_number: Optional[float] = None

    @field_validator("*", mode="before")
    @classmethod
    def _parse_infinity(cls, v: Any) -> Any:
        # JSON carries infinities as the string "inf"
        if isinstance(v, str) and v in ("inf", "-inf"):
            return float(v)
        return v

    @field_validator("emp_bias_se", "emp_var_se", "emp_risk_se", "emp_risk_mean", "mc_risk_se")
    @classmethod
    def _nonnegative(cls, v: Optional[float]) -> Optional[float]:
        if v is not None and v < 0:
            raise ValueError("must be >= 0")
        return v

    def sort_key(self):
        return self.noise_level, self.n, self.p

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            name: ("inf" if value > 0 else "-inf") if isinstance(value, float) and math.isinf(value) else value
            for name, value in self.model_dump(mode="python").items()
        }


ROW_FIELDS: List[str] = list(SweepRow.model_fields)


class SweepResult(BaseModel):
    rows: List[SweepRow] = Field(default_factory=list)
    metadata: Dict[str, Any] = Field(default_factory=dict)

    def sorted_rows(self) -> List[SweepRow]:
        return sorted(self.rows, key=SweepRow.sort_key)

    def select(self, n: Optional[int] = None, noise_level: Optional[float] = None) -> List[SweepRow]:
        """Rows for one (n, noise) series, ascending in p."""
        return [
            r for r in self.sorted_rows()
            if (n is None or r.n == n) and (noise_level is None or r.noise_level == noise_level)
        ]

    @property
    def series(self) -> List[tuple]:
        """Distinct (noise_level, n) pairs in sorted order."""
        return sorted({(r.noise_level, r.n) for r in self.rows})
