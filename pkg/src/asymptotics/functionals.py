"""Deterministic bias/variance functionals for ridgeless and ridge regression.

Spectral sums are normalized averages over the p eigenvalues of Σ_x; traces
against B use the per-eigendirection weights carried by SpectrumContext.
"""
from typing import Optional, Tuple

import numpy as np

from asymptotics.context import SpectrumContext, FixedPointSolution
from asymptotics.errors import SpectrumError, FixedPointError
from asymptotics.fixed_point import solve_c0, solve_mn, mn_derivative, DENOMINATOR_TOL
from asymptotics.kernels import c0_moments, mn_moments


__all__ = [
    "asymptotic_bias",
    "asymptotic_variance",
    "underparam_risk",
    "solve_c1",
    "mn1",
    "ridge_asymptotic_bias",
    "ridge_asymptotic_variance",
    "variance_slope",
    "variance_slope_direct",
    "bridge_lambda",
    "ridge_bridge_gap",
]


def _c0(ctx: SpectrumContext, c0: Optional[FixedPointSolution]) -> float:
    ctx.require_overparametrized()
    return (c0 if c0 is not None else solve_c0(ctx)).value


def _c0_ratio(c0: float, ctx: SpectrumContext) -> float:
    num, den = c0_moments(c0, ctx.gamma, ctx.eigs)
    return num / den


def asymptotic_bias(ctx: SpectrumContext, c0: Optional[FixedPointSolution] = None) -> float:
    """{1 + γc₀·ratio}·Tr(Bᵀ(I + c₀γΣ_x)⁻²Σ_xB)."""
    c = _c0(ctx, c0)
    q = 1.0 + c * ctx.gamma * ctx.eigs
    trace = float(np.sum(ctx.b_weights * ctx.eigs / q ** 2))
    return max((1.0 + ctx.gamma * c * _c0_ratio(c, ctx)) * trace, 0.0)


def asymptotic_variance(ctx: SpectrumContext, c0: Optional[FixedPointSolution] = None) -> float:
    """Tr(Σ_ε)·γc₀·ratio."""
    c = _c0(ctx, c0)
    return max(ctx.trace_sigma_eps * ctx.gamma * c * _c0_ratio(c, ctx), 0.0)


def underparam_risk(gamma: float, trace_sigma_eps: float) -> float:
    """Tr(Σ_ε)·γ/(1 − γ): the ridgeless risk limit for γ < 1, all of it variance."""
    if not 0 < gamma < 1:
        raise SpectrumError(f"underparametrized risk needs 0 < gamma < 1, got {gamma}")
    return trace_sigma_eps * gamma / (1.0 - gamma)


def solve_c1(ctx: SpectrumContext, c0: Optional[FixedPointSolution] = None) -> float:
    """c₁ = c₀·ratio, the λ → 0 limit of m_{n,1}(−λ)."""
    c = _c0(ctx, c0)
    return c * _c0_ratio(c, ctx)


def mn1(lam: float, ctx: SpectrumContext, solution: Optional[FixedPointSolution] = None) -> float:
    """m_{n,1}(−λ) = avg(a·s_i²/D_i²)/(1 + γλ·avg(s_i/D_i²)), a = 1 − γ + γλm."""
    m = (solution if solution is not None else solve_mn(lam, ctx)).value
    a = 1.0 - ctx.gamma + ctx.gamma * lam * m
    _, s_inv2, s2_inv2 = mn_moments(m, lam, ctx.gamma, ctx.eigs)
    denominator = 1.0 + ctx.gamma * lam * s_inv2
    if abs(denominator) < DENOMINATOR_TOL:
        raise FixedPointError(f"m_n1 denominator {denominator:.3e} vanishes at lambda={lam}")
    return float(a * s2_inv2 / denominator)


def ridge_asymptotic_bias(lam: float, ctx: SpectrumContext) -> float:
    """λ²(1 + γm_{n,1}(−λ))·Tr(Bᵀ(λI + aΣ_x)⁻²Σ_xB)."""
    solution = solve_mn(lam, ctx)
    a = 1.0 - ctx.gamma + ctx.gamma * lam * solution.value
    trace = float(np.sum(ctx.b_weights * ctx.eigs / (lam + a * ctx.eigs) ** 2))
    return max(lam ** 2 * (1.0 + ctx.gamma * mn1(lam, ctx, solution)) * trace, 0.0)


def ridge_asymptotic_variance(lam: float, ctx: SpectrumContext) -> float:
    """Tr(Σ_ε)·γ·avg(s_i²(1 − γ + γλ²m_n′(−λ))/(λ + a·s_i)²)."""
    solution = solve_mn(lam, ctx)
    a = 1.0 - ctx.gamma + ctx.gamma * lam * solution.value
    avg = float(np.mean(ctx.eigs ** 2 / (lam + a * ctx.eigs) ** 2))
    return max(ctx.trace_sigma_eps * ctx.gamma * avg * variance_slope(lam, ctx, solution), 0.0)


def variance_slope(lam: float, ctx: SpectrumContext, solution: Optional[FixedPointSolution] = None) -> float:
    """1 − γ + γλ²m_n′(−λ).

    Evaluated through the fixed-point identity a/(1 + γλ·avg(s_i/D_i²)); the
    literal form loses precision to cancellation as λ → 0.
    """
    solution = solution if solution is not None else solve_mn(lam, ctx)
    m = solution.value
    a = 1.0 - ctx.gamma + ctx.gamma * lam * m
    _, s_inv2, _ = mn_moments(m, lam, ctx.gamma, ctx.eigs)
    return float(a / (1.0 + ctx.gamma * lam * s_inv2))


def variance_slope_direct(lam: float, ctx: SpectrumContext) -> float:
    """1 − γ + γλ²m_n′(−λ) evaluated literally from the implicit derivative."""
    return 1.0 - ctx.gamma + ctx.gamma * lam ** 2 * mn_derivative(lam, ctx)


def bridge_lambda(n: int) -> float:
    """Ridge level n^(-1/4) at which the ridge functionals stand in for the ridgeless ones."""
    if n < 1:
        raise SpectrumError(f"n must be >= 1, got {n}")
    return float(n) ** -0.25


def ridge_bridge_gap(ctx: SpectrumContext, lam: float) -> Tuple[float, float]:
    """(|B(λ) − B|, |V(λ) − V|) between the ridge and ridgeless functionals (γ > 1)."""
    c0 = solve_c0(ctx)
    return (
        abs(ridge_asymptotic_bias(lam, ctx) - asymptotic_bias(ctx, c0)),
        abs(ridge_asymptotic_variance(lam, ctx) - asymptotic_variance(ctx, c0)),
    )
