import numpy as np
import pytest

from estimators.exact import exact_risk_report
from estimators.models import EstimatorSpec
from estimators.monte_carlo import monte_carlo_risk, summarize_deviations
from hmm_model.population import RegressionPair, coefficient_recipe, covariance_recipe
from hmm_model.sampling import make_rng


def _pair(p: int, d: int = 3) -> RegressionPair:
    sigma_x = covariance_recipe(p, "uniform-spectrum", 0.5, 3.0, make_rng(5, 0, p))
    return RegressionPair.direct(sigma_x, coefficient_recipe(p, d, make_rng(5, 1, p)), 0.5)


@pytest.mark.parametrize("p", [40, 160])
def test_monte_carlo_agrees_with_exact_conditional(p):
    pair = _pair(p)
    X = make_rng(5, 2, p).standard_normal((80, p)) @ np.linalg.cholesky(pair.sigma_x).T

    exact = exact_risk_report(X, pair, EstimatorSpec.min_norm())
    mc = monte_carlo_risk(X, pair, EstimatorSpec.min_norm(), 500, make_rng(5, 3, p))

    assert mc.method == "monte-carlo"
    assert mc.trials == 500
    assert abs(mc.variance - exact.variance) <= 3 * mc.variance_stderr
    assert abs(mc.bias - exact.bias) <= 3 * mc.bias_stderr + 1e-12
    assert abs(mc.risk - exact.risk) <= 3 * mc.stderr


def test_monte_carlo_ridge_agrees_with_exact_conditional():
    pair = _pair(60)
    X = make_rng(6, 2).standard_normal((40, 60))
    estimator = EstimatorSpec.ridge(0.2)

    exact = exact_risk_report(X, pair, estimator)
    mc = monte_carlo_risk(X, pair, estimator, 400, make_rng(6, 3))

    assert abs(mc.risk - exact.risk) <= 3 * mc.stderr


def test_monte_carlo_is_reproducible():
    pair = _pair(20)
    X = make_rng(7, 2).standard_normal((30, 20))

    first = monte_carlo_risk(X, pair, EstimatorSpec.min_norm(), 10, 99)
    second = monte_carlo_risk(X, pair, EstimatorSpec.min_norm(), 10, 99)
    assert first == second


def test_monte_carlo_rejects_bad_input():
    pair = _pair(20)
    X = make_rng(7, 2).standard_normal((30, 20))

    with pytest.raises(ValueError):
        monte_carlo_risk(X, pair, EstimatorSpec.min_norm(), 1, 0)
    with pytest.raises(ValueError):
        monte_carlo_risk(X[:, :10], pair, EstimatorSpec.min_norm(), 5, 0)


def test_summarize_constant_deviations():
    deviations = np.tile([3.0, 4.0], (6, 1))
    report = summarize_deviations(deviations)

    assert report.variance == 0.0
    assert report.bias == pytest.approx(25.0)
    assert report.risk == pytest.approx(25.0)
    assert report.stderr == 0.0


def test_summarize_splits_mean_risk_into_debiased_bias_and_variance():
    deviations = make_rng(8, 0).normal(loc=[1.0, -2.0, 0.5], scale=0.3, size=(40, 3))
    report = summarize_deviations(deviations)

    mean_dev = deviations.mean(axis=0)
    assert report.variance == pytest.approx(np.sum(np.var(deviations, axis=0, ddof=1)))
    assert report.bias == pytest.approx(mean_dev @ mean_dev - report.variance / 40)
    assert report.bias + report.variance == pytest.approx(report.risk, rel=1e-12)
