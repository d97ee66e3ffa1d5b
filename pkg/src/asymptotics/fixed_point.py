"""Bracketed bisection for the monotone fixed-point equations.

c₀ solves (1/p)·Σ 1/(1 + c₀γs_i) = 1 − 1/γ (γ > 1).
m = m_n(−λ) solves m = (1/p)·Σ 1/([1 − γ + γλm]s_i + λ) (λ > 0, any γ).

Both residuals are monotone in the unknown, so the root is bracketed by
geometric expansion of the upper end and then bisected until the bracket
collapses to adjacent floating point numbers.
"""
from typing import Callable, Tuple

import numpy as np

from core.logger import debug
from asymptotics.context import SpectrumContext, FixedPointSolution
from asymptotics.errors import SpectrumError, FixedPointError
from asymptotics.kernels import c0_residual, mn_residual, mn_moments


__all__ = [
    "RESIDUAL_TOL",
    "MAX_DOUBLINGS",
    "MAX_ITERATIONS",
    "solve_c0",
    "solve_mn",
    "mn_derivative",
    "mn_derivative_fd",
]


RESIDUAL_TOL = 1e-10
MAX_DOUBLINGS = 200
MAX_ITERATIONS = 10_000
DENOMINATOR_TOL = 1e-12


def _expand_bracket(fn: Callable[[float], float], lo: float, width: float) -> Tuple[float, float, int]:
    """Grow [lo, lo + width] until fn changes sign from negative to positive at the upper end."""
    for doubling in range(MAX_DOUBLINGS + 1):
        hi = lo + width
        if fn(hi) > 0:
            return lo, hi, doubling
        lo, width = hi, 2.0 * width
    raise FixedPointError(f"bracket expansion failed after {MAX_DOUBLINGS} doublings (degenerate spectrum?)")


def _bisect(fn: Callable[[float], float], lo: float, hi: float) -> Tuple[float, int]:
    """Root of an increasing fn with fn(lo) < 0 < fn(hi)."""
    iterations = 0
    while iterations < MAX_ITERATIONS:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        iterations += 1
        if fn(mid) < 0:
            lo = mid
        else:
            hi = mid
    f_lo, f_hi = fn(lo), fn(hi)
    return (lo if abs(f_lo) < abs(f_hi) else hi), iterations


def solve_c0(ctx: SpectrumContext) -> FixedPointSolution:
    """Nonnegative root c₀ of the ridgeless fixed-point equation (γ > 1)."""
    if not ctx.gamma > 1:
        raise SpectrumError(f"c0 is defined for gamma > 1, got {ctx.gamma}")
    eigs, gamma = ctx.eigs, ctx.gamma

    # c0_residual decreases, flip it so the bracket search sees an increasing function
    def increasing(c: float) -> float:
        return -c0_residual(c, gamma, eigs)

    lo, hi, doublings = _expand_bracket(increasing, 0.0, 1.0 / float(np.mean(eigs)))
    value, iterations = _bisect(increasing, lo, hi)
    residual = float(c0_residual(value, gamma, eigs))
    debug(f"c0 solve: gamma={gamma:.6g}, c0={value:.6g}, doublings={doublings}, iterations={iterations}")

    if abs(residual) > RESIDUAL_TOL:
        raise FixedPointError(f"c0 residual {residual:.3e} exceeds {RESIDUAL_TOL:g} at gamma={gamma}")
    return FixedPointSolution(value=value, residual=residual, iterations=iterations, bracket=(lo, hi))


def _mn_lower_bound(lam: float, ctx: SpectrumContext) -> float:
    """Smallest admissible m: every denominator (1 − γ + γλm)s_i + λ must stay positive."""
    s1 = float(ctx.eigs[0])
    return max(0.0, (ctx.gamma - 1.0 - lam / s1) / (ctx.gamma * lam))


def solve_mn(lam: float, ctx: SpectrumContext) -> FixedPointSolution:
    """m_n(−λ) > 0 for λ > 0; the residual is reported relative to max(1, m)."""
    if not lam > 0:
        raise SpectrumError(f"lambda must be > 0, got {lam}")
    eigs, gamma = ctx.eigs, ctx.gamma

    def residual_fn(m: float) -> float:
        return mn_residual(m, lam, gamma, eigs)

    floor = _mn_lower_bound(lam, ctx)
    lo, hi, doublings = _expand_bracket(residual_fn, floor, max(1.0, 1.0 / lam))
    value, iterations = _bisect(residual_fn, lo, hi)
    residual = float(residual_fn(value)) / max(1.0, value)
    debug(f"m_n solve: lambda={lam:.3g}, gamma={gamma:.6g}, m={value:.6g}, doublings={doublings}, iterations={iterations}")

    if not np.isfinite(residual) or abs(residual) > RESIDUAL_TOL:
        raise FixedPointError(f"m_n residual {residual:.3e} exceeds {RESIDUAL_TOL:g} at lambda={lam}, gamma={gamma}")
    return FixedPointSolution(value=value, residual=residual, iterations=iterations, bracket=(lo, hi))


def mn_derivative(lam: float, ctx: SpectrumContext, solution: FixedPointSolution = None) -> float:
    """m_n′(z) at z = −λ by implicit differentiation of the fixed-point equation.

    m′ = avg((γms_i + 1)/D_i²) / (1 + γλ·avg(s_i/D_i²)).
    """
    solution = solution if solution is not None else solve_mn(lam, ctx)
    m = solution.value
    inv2, s_inv2, _ = mn_moments(m, lam, ctx.gamma, ctx.eigs)
    denominator = 1.0 + ctx.gamma * lam * s_inv2
    if abs(denominator) < DENOMINATOR_TOL:
        raise FixedPointError(f"derivative denominator {denominator:.3e} vanishes at lambda={lam}")
    return float((ctx.gamma * m * s_inv2 + inv2) / denominator)


def mn_derivative_fd(lam: float, ctx: SpectrumContext, rel_step: float = 1e-6) -> float:
    """Central finite difference of m_n′(−λ) = −d/dλ m_n(−λ), step rel_step·max(λ, 1)."""
    h = rel_step * max(lam, 1.0)
    if h >= lam:
        h = 0.5 * lam
    upper = solve_mn(lam + h, ctx).value
    lower = solve_mn(lam - h, ctx).value
    return -(upper - lower) / (2.0 * h)
