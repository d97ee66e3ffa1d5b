import numpy as np
import pytest

from pydantic import ValidationError

from hmm_model.diagnostics import check_assumption1
from hmm_model.errors import ConstructionError, DimensionError, DivergenceError, ModelError
from hmm_model.population import (
    RegressionPair,
    build_population_model,
    build_transition_matrix,
    coefficient_recipe,
    covariance_recipe,
    rescale_to_radius,
    sigma_z,
    spectral_radius,
)
from hmm_model.spec import ModelSpec, read_model_spec, write_model_spec


def test_population_model_shapes_and_radius(small_spec):
    model = build_population_model(small_spec)

    assert model.A.shape == (4, 4)
    assert model.W.shape == (4, 12)
    assert model.sigma_x.shape == (12, 12)
    assert model.B.shape == (12, 4)
    assert model.sigma_eps.shape == (4, 4)
    assert spectral_radius(model.A) == pytest.approx(0.9, rel=1e-10)


def test_population_model_is_a_consistent_regression(small_spec):
    model = build_population_model(small_spec)

    # x = zW + u with unit representation noise keeps Σ_x above the identity
    assert model.sigma_x_eigs[-1] >= 1.0 - 1e-10
    np.testing.assert_allclose(model.sigma_x @ model.B, model.sigma_xy, atol=1e-9)

    schur = model.sigma_y - model.sigma_xy.T @ np.linalg.solve(model.sigma_x, model.sigma_xy)
    np.testing.assert_allclose(model.sigma_eps, schur, atol=1e-9)
    assert np.linalg.eigvalsh(model.sigma_eps)[0] >= small_spec.sigma_xi2 - 1e-9


def test_population_model_is_deterministic_in_seed(small_spec):
    first = build_population_model(small_spec)
    second = build_population_model(small_spec)
    other = build_population_model(small_spec.model_copy(update={"seed": 8}))

    np.testing.assert_array_equal(first.A, second.A)
    np.testing.assert_array_equal(first.B, second.B)
    assert not np.allclose(first.A, other.A)


def test_explicit_recipes_and_stationary_latent_covariance():
    spec = ModelSpec(
        d=2,
        p=3,
        a_recipe={"kind": "explicit", "matrix": [[0.5, 0.0], [0.0, 0.2]], "rho": None},
        w_recipe={"kind": "explicit", "matrix": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]},
    )
    model = build_population_model(spec)

    np.testing.assert_array_equal(model.A, np.diag([0.5, 0.2]))
    np.testing.assert_allclose(np.diag(model.sigma_z), [1.0 + 0.25 / 0.75, 1.0 + 0.04 / 0.96], rtol=1e-10)
    np.testing.assert_allclose(model.sigma_x, model.W.T @ model.sigma_z @ model.W + np.eye(3), atol=1e-12)


def test_sigma_z_finite_positions(rng):
    A = build_transition_matrix(3, 0.5, rng)

    np.testing.assert_array_equal(sigma_z(A, 0), np.eye(3))
    np.testing.assert_allclose(sigma_z(A, 1, sigma_eps2=2.0), np.eye(3) + A.T @ A, atol=1e-12)
    np.testing.assert_allclose(sigma_z(A, 400), sigma_z(A, "stationary"), atol=1e-10)


def test_sigma_z_stationary_solves_lyapunov(rng):
    A = build_transition_matrix(5, 0.9, rng)
    S = sigma_z(A, "stationary")

    np.testing.assert_allclose(S - np.eye(5), A.T @ S @ A, atol=1e-8 * np.linalg.norm(S))


def test_sigma_z_errors():
    with pytest.raises(DivergenceError):
        sigma_z(1.2 * np.eye(2), "stationary")
    with pytest.raises(ModelError):
        sigma_z(0.5 * np.eye(2), -1)
    with pytest.raises(DimensionError):
        sigma_z(np.ones((2, 3)), 1)


def test_transition_construction_errors(rng):
    with pytest.raises(ModelError):
        build_transition_matrix(3, 1.0, rng)
    with pytest.raises(ConstructionError):
        rescale_to_radius(np.array([[0.0, 1.0], [0.0, 0.0]]), 0.5)


@pytest.mark.parametrize("doc", [
    {"d": 2, "p": 3, "a_recipe": {"kind": "gaussian", "rho": 1.0}},
    {"d": 2, "p": 3, "unknown": 1},
    {"d": 2, "p": 3, "w_recipe": {"kind": "explicit", "matrix": [[1.0, 0.0], [0.0, 1.0]]}},
    {"d": 2, "p": 3, "a_recipe": {"kind": "explicit"}},
    {"d": 0, "p": 3},
])
def test_model_spec_rejects_invalid_input(doc):
    with pytest.raises(ValidationError):
        ModelSpec.model_validate(doc)


def test_model_spec_file(tmp_path, small_spec):
    write_model_spec(small_spec, tmp_path / "spec.json")
    assert read_model_spec(tmp_path / "spec.json") == small_spec


def test_covariance_and_coefficient_recipes(rng):
    sigma_x = covariance_recipe(30, "uniform-spectrum", 0.5, 3.0, rng)
    eigs = np.linalg.eigvalsh(sigma_x)

    np.testing.assert_allclose(sigma_x, sigma_x.T)
    assert eigs[0] >= 0.5 - 1e-10 and eigs[-1] <= 3.0 + 1e-10
    np.testing.assert_array_equal(covariance_recipe(4), np.eye(4))
    assert np.linalg.norm(coefficient_recipe(30, 7, rng)) == pytest.approx(1.0)

    with pytest.raises(ModelError):
        covariance_recipe(4, "banded")


def test_direct_pair(isotropic_pair):
    np.testing.assert_allclose(isotropic_pair.sigma_eps, 0.2 * np.eye(5))
    assert isotropic_pair.trace_sigma_eps == pytest.approx(1.0)
    assert isotropic_pair.null_risk() == pytest.approx(float(np.trace(isotropic_pair.B.T @ isotropic_pair.B)))
    assert isotropic_pair.signal_to_noise() == pytest.approx(1.0)

    with pytest.raises(ModelError):
        RegressionPair.direct(np.eye(3), np.ones((3, 2)), -0.1)
    with pytest.raises(DimensionError):
        RegressionPair.from_matrices(np.eye(3), np.ones((4, 2)), np.eye(2))


def test_assumption_flags(isotropic_pair):
    report = check_assumption1(isotropic_pair, n=20)
    assert report.ok
    assert report.ratio == pytest.approx(2.0)

    at_threshold = check_assumption1(isotropic_pair, n=40)
    assert at_threshold.flags["gap"]
    assert not at_threshold.ok

    extreme = check_assumption1(isotropic_pair, n=40, M=0.5)
    assert extreme.flags["s1"]
    assert extreme.flags["lambda_min"]


def test_inverse_eigenvalue_condition_is_normalized_by_p():
    pair = RegressionPair.direct(2.0 * np.eye(40), coefficient_recipe(40, 2, np.random.default_rng(1)), 0.5)
    report = check_assumption1(pair, n=20, M=10.0)

    assert report.inv_eig_sum == pytest.approx(20.0)
    assert report.inv_eig_mean == pytest.approx(0.5)
    assert set(report.flags) == {"s1", "inv_eig_mean", "gap", "ratio", "lambda_min"}
    assert report.ok
