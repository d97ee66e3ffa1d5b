"""Risk of min-norm and ridge fits conditional on the realized design X.

For a fixed X the estimator is linear in the noise, so bias and variance
have closed forms in Σ_x, B, Tr(Σ_ε) and the spectrum of XᵀX.
"""
from typing import Literal

import numpy as np

from core.logger import debug
from estimators.fit import DEFAULT_REL_CUTOFF, check_design, design_svd
from estimators.models import FitResult, EstimatorSpec, RiskReport
from hmm_model.population import RegressionPair


__all__ = [
    "exact_bias_min_norm",
    "exact_variance_min_norm",
    "exact_bias_ridge",
    "exact_variance_ridge",
    "plug_in_risk",
    "exact_risk_report",
    "plug_in_report",
    "ridge_variance_gap_bound",
]


def _check_model(X: np.ndarray, model: RegressionPair) -> np.ndarray:
    X, _ = check_design(X)
    if X.shape[1] != model.p:
        raise ValueError(f"X has {X.shape[1]} columns, model has p={model.p}")
    return X


def _quadratic_trace(M: np.ndarray, sigma: np.ndarray) -> float:
    """Tr(MᵀΣM)."""
    return float(np.sum(M * (sigma @ M)))


def exact_bias_min_norm(X: np.ndarray, model: RegressionPair, rel_cutoff: float = DEFAULT_REL_CUTOFF) -> float:
    """Tr(Bᵀ(I − P)Σ_x(I − P)B) with P the projector onto the row space of X."""
    X = _check_model(X, model)
    _, s, Vt, _ = design_svd(X, rel_cutoff)
    if s.size == model.p:
        return 0.0
    residual = model.B - Vt.T @ (Vt @ model.B)
    return max(_quadratic_trace(residual, model.sigma_x), 0.0)


def exact_variance_min_norm(X: np.ndarray, model: RegressionPair, rel_cutoff: float = DEFAULT_REL_CUTOFF) -> float:
    """Tr(Σ_ε)·Tr(Σ_x(XᵀX)⁺)."""
    X = _check_model(X, model)
    _, s, Vt, _ = design_svd(X, rel_cutoff)
    V = Vt.T
    weights = np.sum(V * (model.sigma_x @ V), axis=0)
    return max(model.trace_sigma_eps * float(np.sum(weights / s ** 2)), 0.0)


def _sample_covariance(X: np.ndarray) -> np.ndarray:
    S = X.T @ X / X.shape[0]
    return 0.5 * (S + S.T)


def exact_bias_ridge(X: np.ndarray, model: RegressionPair, lam: float) -> float:
    """λ²·Tr(Bᵀ(S + λI)⁻¹Σ_x(S + λI)⁻¹B) with S = XᵀX/n."""
    if not lam > 0:
        raise ValueError(f"ridge penalty must be > 0, got {lam}")
    X = _check_model(X, model)
    S = _sample_covariance(X)
    R = np.linalg.solve(S + lam * np.eye(model.p), model.B)
    return max(lam ** 2 * _quadratic_trace(R, model.sigma_x), 0.0)


def exact_variance_ridge(
        X: np.ndarray,
        model: RegressionPair,
        lam: float,
        form: Literal["resolvent", "eigen"] = "resolvent"
) -> float:
    """Tr(Σ_ε)/n·Tr(Σ_x·S(S + λI)⁻²).

    `eigen` evaluates the same trace from S = U·D·Uᵀ as Σ_k (u_kᵀΣ_xu_k)·d_k/(λ + d_k)².
    """
    if not lam > 0:
        raise ValueError(f"ridge penalty must be > 0, got {lam}")
    X = _check_model(X, model)
    n = X.shape[0]
    S = _sample_covariance(X)

    if form == "resolvent":
        shifted = S + lam * np.eye(model.p)
        T = np.linalg.solve(shifted, np.linalg.solve(shifted, S))
        trace = float(np.sum(model.sigma_x * T.T))
    elif form == "eigen":
        D, U = np.linalg.eigh(S)
        D = np.clip(D, 0.0, None)
        weights = np.sum(U * (model.sigma_x @ U), axis=0)
        trace = float(np.sum(weights * D / (lam + D) ** 2))
    else:
        raise ValueError(f"unknown form '{form}'")

    return max(model.trace_sigma_eps * trace / n, 0.0)


def plug_in_risk(fit: FitResult, model: RegressionPair) -> float:
    """Tr((B − B̂)ᵀΣ_x(B − B̂)) for one realized B̂."""
    if fit.Bhat.shape != model.B.shape:
        raise ValueError(f"Bhat shape {fit.Bhat.shape} does not match B shape {model.B.shape}")
    return max(_quadratic_trace(model.B - fit.Bhat, model.sigma_x), 0.0)


def exact_risk_report(
        X: np.ndarray,
        model: RegressionPair,
        estimator: EstimatorSpec,
        rel_cutoff: float = DEFAULT_REL_CUTOFF
) -> RiskReport:
    if estimator.kind == "ridge":
        bias = exact_bias_ridge(X, model, estimator.lam)
        variance = exact_variance_ridge(X, model, estimator.lam)
    else:
        bias = exact_bias_min_norm(X, model, rel_cutoff)
        variance = exact_variance_min_norm(X, model, rel_cutoff)

    debug(f"exact {estimator.label}: n={len(X)}, bias={bias:.6g}, variance={variance:.6g}")
    return RiskReport(bias=bias, variance=variance, risk=bias + variance, method="exact-conditional")


def plug_in_report(fit: FitResult, model: RegressionPair) -> RiskReport:
    """A single realized fit has no noise average: the whole risk is reported as bias."""
    risk = plug_in_risk(fit, model)
    return RiskReport(bias=risk, variance=0.0, risk=risk, method="plug-in")


def ridge_variance_gap_bound(
        X: np.ndarray,
        model: RegressionPair,
        lam: float,
        rel_cutoff: float = DEFAULT_REL_CUTOFF
) -> float:
    """Upper bound 2λ·s₁·Tr(Σ_ε)·n²/σ_min(X)⁴ on |V_X(B̂_λ) − V_X(B̂)|.

    σ_min is the smallest singular value above the cutoff.
    """
    if not lam > 0:
        raise ValueError(f"ridge penalty must be > 0, got {lam}")
    X = _check_model(X, model)
    _, s, _, _ = design_svd(X, rel_cutoff)
    if s.size == 0:
        return 0.0
    n = X.shape[0]
    return 2.0 * lam * float(model.sigma_x_eigs[0]) * model.trace_sigma_eps * n ** 2 / float(s[-1]) ** 4
