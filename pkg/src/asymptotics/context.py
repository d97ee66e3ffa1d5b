from dataclasses import dataclass, field, replace
from typing import Dict, Any, Optional, Tuple

import numpy as np

from asymptotics.errors import SpectrumError
from hmm_model.population import RegressionPair


__all__ = ["SpectrumContext", "FixedPointSolution"]


@dataclass(frozen=True, eq=False)
class SpectrumContext:
    """Everything the deterministic functionals need about (Σ_x, B, Σ_ε) at ratio γ.

    `b_weights[i]` is the squared norm of row i of UᵀB, so that any
    Tr(Bᵀ f(Σ_x) B) equals Σ_i b_weights[i]·f(s_i).
    """
    eigs: np.ndarray = field(repr=False)
    gamma: float
    trace_sigma_eps: float
    b_weights: np.ndarray = field(repr=False)

    def __post_init__(self):
        eigs = np.ascontiguousarray(self.eigs, dtype=float)
        weights = np.ascontiguousarray(self.b_weights, dtype=float)
        if eigs.ndim != 1 or eigs.size == 0:
            raise SpectrumError("spectrum must be a nonempty 1-D array")
        if not np.all(np.isfinite(eigs)) or np.any(eigs <= 0):
            raise SpectrumError("spectrum must be finite and strictly positive")
        if weights.shape != eigs.shape:
            raise SpectrumError(f"b_weights shape {weights.shape} does not match spectrum {eigs.shape}")
        if not self.gamma > 0:
            raise SpectrumError(f"gamma must be > 0, got {self.gamma}")
        if self.trace_sigma_eps < 0:
            raise SpectrumError(f"Tr(Sigma_eps) must be >= 0, got {self.trace_sigma_eps}")
        order = np.argsort(-eigs, kind="stable")
        object.__setattr__(self, "eigs", np.ascontiguousarray(eigs[order]))
        object.__setattr__(self, "b_weights", np.ascontiguousarray(weights[order]))
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "trace_sigma_eps", float(self.trace_sigma_eps))

    @classmethod
    def from_pair(cls, model: RegressionPair, n: int) -> "SpectrumContext":
        if n < 1:
            raise SpectrumError(f"n must be >= 1, got {n}")
        return cls(
            eigs=model.sigma_x_eigs,
            gamma=model.p / n,
            trace_sigma_eps=model.trace_sigma_eps,
            b_weights=np.sum(model.B_rotated ** 2, axis=1),
        )

    @classmethod
    def isotropic(
            cls,
            p: int,
            gamma: float,
            trace_sigma_eps: float = 1.0,
            b_norm2: float = 1.0,
            scale: float = 1.0
    ) -> "SpectrumContext":
        """Σ_x = scale·I_p with ‖B‖_F² = b_norm2 spread evenly over the eigenbasis."""
        return cls(
            eigs=np.full(p, float(scale)),
            gamma=gamma,
            trace_sigma_eps=trace_sigma_eps,
            b_weights=np.full(p, b_norm2 / p),
        )

    def with_gamma(self, gamma: float) -> "SpectrumContext":
        return replace(self, gamma=gamma)

    def with_trace(self, trace_sigma_eps: float) -> "SpectrumContext":
        return replace(self, trace_sigma_eps=trace_sigma_eps)

    @property
    def p(self) -> int:
        return self.eigs.size

    @property
    def b_norm2(self) -> float:
        return float(np.sum(self.b_weights))

    @property
    def null_risk(self) -> float:
        return float(self.b_weights @ self.eigs)

    def require_overparametrized(self) -> None:
        if not self.gamma > 1:
            raise SpectrumError(f"functional needs gamma > 1, got {self.gamma}")


@dataclass(frozen=True)
class FixedPointSolution:
    value: float
    residual: float
    iterations: int
    bracket: Tuple[float, float]
    derivative: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "value": self.value,
            "residual": self.residual,
            "iterations": self.iterations,
            "bracket": list(self.bracket),
            "derivative": self.derivative,
        }
