from typing import Tuple

import numpy as np

from estimators.models import FitResult, EstimatorSpec


__all__ = [
    "DEFAULT_REL_CUTOFF",
    "check_design",
    "design_svd",
    "smoother_matrix",
    "fit_min_norm",
    "fit_ridge",
    "fit",
    "condition_number",
]


DEFAULT_REL_CUTOFF = 1e-12


def check_design(X: np.ndarray, Y: np.ndarray = None) -> Tuple[np.ndarray, np.ndarray]:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.size == 0:
        raise ValueError(f"X must be a nonempty 2-D array, got shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("X contains non-finite entries")
    if Y is None:
        return X, None
    Y = np.asarray(Y, dtype=float)
    if Y.ndim != 2 or Y.shape[0] != X.shape[0]:
        raise ValueError(f"Y must have {X.shape[0]} rows, got shape {Y.shape}")
    if not np.all(np.isfinite(Y)):
        raise ValueError("Y contains non-finite entries")
    return X, Y


def design_svd(X: np.ndarray, rel_cutoff: float = DEFAULT_REL_CUTOFF):
    """Thin SVD of X restricted to singular values above the cutoff.

    Returns (U_r, s_r, Vt_r, cutoff); the cutoff is rel_cutoff·max(n, p)·s_max.
    """
    U, s, Vt = np.linalg.svd(X, full_matrices=False)
    cutoff = rel_cutoff * max(X.shape) * (float(s[0]) if s.size else 0.0)
    keep = s > cutoff
    return U[:, keep], s[keep], Vt[keep], cutoff


def smoother_matrix(X: np.ndarray, lam: float = 0.0, rel_cutoff: float = DEFAULT_REL_CUTOFF):
    """p×n matrix H with Bhat = H·Y; min-norm for lam = 0, ridge otherwise."""
    U, s, Vt, cutoff = design_svd(X, rel_cutoff)
    n = X.shape[0]
    gain = 1.0 / s if lam == 0 else s / (s ** 2 + n * lam)
    return (Vt.T * gain) @ U.T, s.size, cutoff


def fit_min_norm(X: np.ndarray, Y: np.ndarray, rel_cutoff: float = DEFAULT_REL_CUTOFF) -> FitResult:
    """Minimum-Frobenius-norm least squares solution V·S⁺·Uᵀ·Y."""
    X, Y = check_design(X, Y)
    H, rank, cutoff = smoother_matrix(X, 0.0, rel_cutoff)
    return FitResult(Bhat=H @ Y, rank=rank, lam=0.0, svd_cutoff=cutoff)


def fit_ridge(X: np.ndarray, Y: np.ndarray, lam: float, rel_cutoff: float = DEFAULT_REL_CUTOFF) -> FitResult:
    """(XᵀX + nλI)⁻¹XᵀY, evaluated through the SVD of X."""
    if not lam > 0:
        raise ValueError(f"ridge penalty must be > 0, got {lam}; use fit_min_norm for the ridgeless limit")
    X, Y = check_design(X, Y)
    H, rank, cutoff = smoother_matrix(X, lam, rel_cutoff)
    return FitResult(Bhat=H @ Y, rank=rank, lam=float(lam), svd_cutoff=cutoff)


def fit(
        X: np.ndarray,
        Y: np.ndarray,
        estimator: EstimatorSpec,
        rel_cutoff: float = DEFAULT_REL_CUTOFF
) -> FitResult:
    if estimator.kind == "ridge":
        return fit_ridge(X, Y, estimator.lam, rel_cutoff)
    return fit_min_norm(X, Y, rel_cutoff)


def condition_number(X: np.ndarray, rel_cutoff: float = DEFAULT_REL_CUTOFF) -> float:
    """s_max/s_min over the min(n, p) singular values; inf when rank deficient."""
    X, _ = check_design(X)
    s = np.linalg.svd(X, compute_uv=False)
    cutoff = rel_cutoff * max(X.shape) * float(s[0])
    if s[-1] <= cutoff:
        return float("inf")
    return float(s[0] / s[-1])
