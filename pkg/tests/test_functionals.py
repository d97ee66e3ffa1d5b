import numpy as np
import pytest

from asymptotics.context import SpectrumContext
from asymptotics.errors import SpectrumError
from asymptotics.fixed_point import solve_c0
from asymptotics.functionals import (
    asymptotic_bias,
    asymptotic_variance,
    bridge_lambda,
    mn1,
    ridge_asymptotic_bias,
    ridge_asymptotic_variance,
    ridge_bridge_gap,
    solve_c1,
    underparam_risk,
    variance_slope,
    variance_slope_direct,
)


@pytest.fixture
def anisotropic_ctx() -> SpectrumContext:
    rng = np.random.default_rng(17)
    p = 200
    return SpectrumContext(
        eigs=rng.uniform(0.5, 3.0, size=p),
        gamma=2.0,
        trace_sigma_eps=1.0,
        b_weights=rng.dirichlet(np.ones(p)),
    )


@pytest.mark.parametrize("gamma", [1.5, 2.0, 4.0])
def test_isotropic_ridgeless_closed_forms(gamma):
    ctx = SpectrumContext.isotropic(100, gamma, trace_sigma_eps=1.0, b_norm2=1.0)

    assert asymptotic_bias(ctx) == pytest.approx(1.0 - 1.0 / gamma, rel=1e-8)
    assert asymptotic_variance(ctx) == pytest.approx(1.0 / (gamma - 1.0), rel=1e-8)


def test_isotropic_gamma_two_reference_values():
    ctx = SpectrumContext.isotropic(500, 2.0)
    assert asymptotic_bias(ctx) + asymptotic_variance(ctx) == pytest.approx(1.5, rel=1e-8)


def test_underparametrized_risk():
    assert underparam_risk(0.5, 1.0) == 1.0
    assert underparam_risk(0.25, 3.0) == pytest.approx(1.0)
    with pytest.raises(SpectrumError):
        underparam_risk(1.0, 1.0)


def test_functionals_need_overparametrization():
    with pytest.raises(SpectrumError):
        asymptotic_bias(SpectrumContext.isotropic(10, 0.8))


def test_variance_scales_with_noise_trace(anisotropic_ctx):
    c0 = solve_c0(anisotropic_ctx)
    base = asymptotic_variance(anisotropic_ctx, c0)
    assert asymptotic_variance(anisotropic_ctx.with_trace(3.0), c0) == pytest.approx(3.0 * base)


def test_c1_is_the_small_lambda_limit_of_mn1(anisotropic_ctx):
    assert mn1(1e-6, anisotropic_ctx) == pytest.approx(solve_c1(anisotropic_ctx), rel=1e-3)

    iso = SpectrumContext.isotropic(50, 3.0)
    assert solve_c1(iso) == pytest.approx(solve_c0(iso).value, rel=1e-10)


def test_variance_slope_identity(anisotropic_ctx):
    for lam in (0.1, 0.5, 2.0):
        assert variance_slope(lam, anisotropic_ctx) == pytest.approx(variance_slope_direct(lam, anisotropic_ctx), abs=1e-7)


def test_ridge_functionals_at_large_penalty(anisotropic_ctx):
    lam = 1e6
    assert ridge_asymptotic_bias(lam, anisotropic_ctx) == pytest.approx(anisotropic_ctx.null_risk, rel=1e-4)
    assert ridge_asymptotic_variance(lam, anisotropic_ctx) < 1e-8


def test_ridge_functionals_are_defined_at_the_threshold():
    ctx = SpectrumContext.isotropic(100, 1.0)
    bias = ridge_asymptotic_bias(0.1, ctx)
    variance = ridge_asymptotic_variance(0.1, ctx)
    assert np.isfinite(bias) and bias > 0
    assert np.isfinite(variance) and variance > 0


def test_ridge_to_ridgeless_bridge(anisotropic_ctx):
    gaps = [ridge_bridge_gap(anisotropic_ctx, lam) for lam in (1e-2, 1e-3, 1e-4)]
    bias_gaps = [g[0] for g in gaps]
    variance_gaps = [g[1] for g in gaps]

    assert bias_gaps[0] > bias_gaps[1] > bias_gaps[2]
    assert variance_gaps[0] > variance_gaps[1] > variance_gaps[2]


def test_bridge_lambda():
    assert bridge_lambda(16) == pytest.approx(0.5)
    with pytest.raises(SpectrumError):
        bridge_lambda(0)
