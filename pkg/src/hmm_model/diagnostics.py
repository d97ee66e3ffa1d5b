from typing import Dict

import numpy as np

from pydantic import BaseModel, Field

from core.logger import warn
from hmm_model.population import RegressionPair


__all__ = ["AssumptionReport", "check_assumption1"]


class AssumptionReport(BaseModel):
    """Spectral regularity of Σ_x at sample size n, checked against a bound M.

    A flag set to True means the corresponding condition is violated.
    """
    n: int
    p: int
    M: float
    s1: float = Field(..., description="Largest eigenvalue of sigma_x")
    inv_eig_sum: float = Field(..., description="Sum of reciprocal eigenvalues")
    inv_eig_mean: float = Field(..., description="inv_eig_sum / p, the quantity compared against M")
    gap: float = Field(..., description="|1 - p/n|")
    ratio: float = Field(..., description="p/n")
    lambda_min: float = Field(..., description="Smallest eigenvalue of sigma_x")
    flags: Dict[str, bool]

    @property
    def ok(self) -> bool:
        return not any(self.flags.values())


def check_assumption1(model: RegressionPair, n: int, M: float = 100.0) -> AssumptionReport:
    """Evaluate the regularity conditions; never raises for a violated one."""
    eigs = model.sigma_x_eigs
    ratio = model.p / n
    positive = eigs[eigs > 0]
    inv_eig_sum = float(np.sum(1.0 / positive)) if positive.size == eigs.size else float("inf")

    report = AssumptionReport(
        n=n,
        p=model.p,
        M=M,
        s1=float(eigs[0]),
        inv_eig_sum=inv_eig_sum,
        inv_eig_mean=inv_eig_sum / model.p,
        gap=abs(1.0 - ratio),
        ratio=ratio,
        lambda_min=float(eigs[-1]),
        flags={
            "s1": not float(eigs[0]) <= M,
            # normalized like the spectral sums of the fixed-point equations
            "inv_eig_mean": not inv_eig_sum / model.p <= M,
            "gap": not abs(1.0 - ratio) >= 1.0 / M,
            "ratio": not 1.0 / M <= ratio <= M,
            "lambda_min": not float(eigs[-1]) > 1.0 / M,
        },
    )

    for name, violated in report.flags.items():
        if violated:
            warn(f"Regularity condition '{name}' violated at n={n}, p={model.p}, M={M}")
    return report
