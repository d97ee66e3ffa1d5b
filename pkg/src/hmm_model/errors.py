class ModelError(ValueError):
    """Invalid model description (bad recipe, shape, or parameter)."""


class DimensionError(ModelError):
    pass


class DivergenceError(ModelError):
    """The stationary covariance series does not converge (spectral radius >= 1)."""


class ConstructionError(RuntimeError):
    """A numerically valid model could not be produced from the recipe."""
