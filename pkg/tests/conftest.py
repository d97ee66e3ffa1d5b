import numpy as np
import pytest

from hmm_model.population import RegressionPair, coefficient_recipe, covariance_recipe
from hmm_model.spec import ModelSpec


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def isotropic_pair(rng) -> RegressionPair:
    """Σ_x = I_40, ‖B‖_F = 1, d = 5, Σ_ε = 0.2·I (Tr = 1)."""
    return RegressionPair.direct(np.eye(40), coefficient_recipe(40, 5, rng), 0.2)


@pytest.fixture
def anisotropic_pair(rng) -> RegressionPair:
    """Σ_x with spectrum uniform in [0.5, 3], p = 40, d = 5, Σ_ε = 0.2·I."""
    sigma_x = covariance_recipe(40, "uniform-spectrum", 0.5, 3.0, rng)
    return RegressionPair.direct(sigma_x, coefficient_recipe(40, 5, rng), 0.2)


@pytest.fixture
def small_spec() -> ModelSpec:
    return ModelSpec(d=4, p=12, seed=7)
