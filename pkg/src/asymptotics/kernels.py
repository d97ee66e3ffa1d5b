"""Spectral averages evaluated inside the fixed-point solvers.

Every sum over the spectrum is the normalized average (1/p)·Σ_i.
"""
import numpy as np

from numba import jit


__all__ = ["c0_residual", "mn_residual", "mn_moments", "c0_moments"]


@jit(nopython=True)
def c0_residual(c, gamma, eigs):
    """(1/p)·Σ 1/(1 + cγs_i) − (1 − 1/γ); strictly decreasing in c >= 0."""
    acc = 0.0
    for s in eigs:
        acc += 1.0 / (1.0 + c * gamma * s)
    return acc / eigs.size - (1.0 - 1.0 / gamma)


@jit(nopython=True)
def c0_moments(c, gamma, eigs):
    """(Σ s²/(1 + cγs)², Σ s/(1 + cγs)²) averaged over the spectrum."""
    num = 0.0
    den = 0.0
    for s in eigs:
        q = 1.0 + c * gamma * s
        num += s * s / (q * q)
        den += s / (q * q)
    return num / eigs.size, den / eigs.size


@jit(nopython=True)
def mn_residual(m, lam, gamma, eigs):
    """m − (1/p)·Σ 1/D_i, or −inf when some D_i <= 0 (below the admissible range)."""
    a = 1.0 - gamma + gamma * lam * m
    acc = 0.0
    for s in eigs:
        den = a * s + lam
        if den <= 0.0:
            return -np.inf
        acc += 1.0 / den
    return m - acc / eigs.size


@jit(nopython=True)
def mn_moments(m, lam, gamma, eigs):
    """Averages of 1/D², s/D² and s²/D² at m."""
    a = 1.0 - gamma + gamma * lam * m
    inv2 = 0.0
    s_inv2 = 0.0
    s2_inv2 = 0.0
    for s in eigs:
        den = a * s + lam
        q = 1.0 / (den * den)
        inv2 += q
        s_inv2 += s * q
        s2_inv2 += s * s * q
    p = eigs.size
    return inv2 / p, s_inv2 / p, s2_inv2 / p
