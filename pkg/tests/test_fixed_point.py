import numpy as np
import pytest

from asymptotics.context import SpectrumContext
from asymptotics.errors import SpectrumError
from asymptotics.fixed_point import RESIDUAL_TOL, mn_derivative, mn_derivative_fd, solve_c0, solve_mn
from asymptotics.kernels import c0_residual, mn_residual


def _random_context(rng: np.random.Generator, max_p: int = 500) -> SpectrumContext:
    p = int(rng.integers(1, max_p + 1))
    return SpectrumContext(
        eigs=rng.uniform(0.5, 3.0, size=p),
        gamma=float(rng.uniform(1.1, 10.0)),
        trace_sigma_eps=1.0,
        b_weights=np.full(p, 1.0 / p),
    )


def _isotropic_mn(gamma: float, lam: float) -> float:
    """Positive root of γλm² + (1 − γ + λ)m − 1 = 0."""
    b = 1.0 - gamma + lam
    return (-b + np.sqrt(b * b + 4.0 * gamma * lam)) / (2.0 * gamma * lam)


def test_context_sorts_and_validates():
    ctx = SpectrumContext(eigs=[1.0, 3.0, 2.0], gamma=2.0, trace_sigma_eps=1.0, b_weights=[0.1, 0.3, 0.2])
    np.testing.assert_array_equal(ctx.eigs, [3.0, 2.0, 1.0])
    np.testing.assert_array_equal(ctx.b_weights, [0.3, 0.2, 0.1])
    assert ctx.null_risk == pytest.approx(0.9 + 0.4 + 0.1)

    with pytest.raises(SpectrumError):
        SpectrumContext(eigs=[1.0, 0.0], gamma=2.0, trace_sigma_eps=1.0, b_weights=[0.5, 0.5])
    with pytest.raises(SpectrumError):
        SpectrumContext(eigs=[1.0], gamma=0.0, trace_sigma_eps=1.0, b_weights=[1.0])
    with pytest.raises(SpectrumError):
        SpectrumContext(eigs=[1.0, 2.0], gamma=2.0, trace_sigma_eps=1.0, b_weights=[1.0])


def test_context_from_pair(anisotropic_pair):
    ctx = SpectrumContext.from_pair(anisotropic_pair, n=20)
    assert ctx.gamma == pytest.approx(2.0)
    assert ctx.b_norm2 == pytest.approx(float(np.sum(anisotropic_pair.B ** 2)))
    assert ctx.null_risk == pytest.approx(anisotropic_pair.null_risk())


@pytest.mark.parametrize("gamma", [1.2, 1.5, 2.0, 4.0, 10.0])
def test_isotropic_c0(gamma):
    solution = solve_c0(SpectrumContext.isotropic(50, gamma))
    assert solution.value == pytest.approx(1.0 / (gamma * (gamma - 1.0)), rel=1e-8)
    assert abs(solution.residual) <= RESIDUAL_TOL


def test_c0_scales_inversely_with_the_spectrum():
    base = solve_c0(SpectrumContext.isotropic(10, 3.0)).value
    scaled = solve_c0(SpectrumContext.isotropic(10, 3.0, scale=4.0)).value
    assert scaled == pytest.approx(base / 4.0, rel=1e-8)


def test_c0_requires_overparametrization():
    with pytest.raises(SpectrumError):
        solve_c0(SpectrumContext.isotropic(10, 1.0))
    with pytest.raises(SpectrumError):
        solve_c0(SpectrumContext.isotropic(10, 0.5))


def test_fixed_point_residuals_on_random_spectra():
    rng = np.random.default_rng(3)
    for _ in range(100):
        ctx = _random_context(rng)
        c0 = solve_c0(ctx).value
        assert c0 > 0
        assert abs(c0_residual(c0, ctx.gamma, ctx.eigs)) <= 1e-10


@pytest.mark.parametrize("gamma", [0.5, 1.0, 2.0, 5.0])
@pytest.mark.parametrize("lam", [1e-3, 0.1, 1.0, 10.0])
def test_isotropic_mn_closed_form(gamma, lam):
    ctx = SpectrumContext.isotropic(20, gamma)
    solution = solve_mn(lam, ctx)

    assert solution.value == pytest.approx(_isotropic_mn(gamma, lam), rel=1e-10)
    assert abs(mn_residual(solution.value, lam, gamma, ctx.eigs)) <= 1e-10 * max(1.0, solution.value)


def test_mn_rejects_nonpositive_lambda():
    with pytest.raises(SpectrumError):
        solve_mn(0.0, SpectrumContext.isotropic(10, 2.0))


def test_small_lambda_expansion_of_mn():
    ctx = SpectrumContext.isotropic(100, 2.0)
    c0 = solve_c0(ctx).value
    gaps = [abs(solve_mn(lam, ctx).value - (1.0 - 1.0 / ctx.gamma) / lam - c0) for lam in (1e-2, 1e-3, 1e-4)]

    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] <= 1e-3


def test_derivative_matches_finite_differences():
    rng = np.random.default_rng(4)
    for _ in range(20):
        ctx = _random_context(rng, max_p=200)
        lam = float(rng.uniform(0.05, 2.0))
        assert mn_derivative(lam, ctx) == pytest.approx(mn_derivative_fd(lam, ctx), rel=1e-6)


def test_isotropic_derivative_closed_form():
    gamma, lam, h = 3.0, 0.4, 1e-5
    ctx = SpectrumContext.isotropic(10, gamma)
    expected = -(_isotropic_mn(gamma, lam + h) - _isotropic_mn(gamma, lam - h)) / (2 * h)
    assert mn_derivative(lam, ctx) == pytest.approx(expected, rel=1e-7)
