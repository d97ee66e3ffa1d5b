class SpectrumError(ValueError):
    """Spectrum or overparametrization ratio outside the domain of a functional."""


class FixedPointError(RuntimeError):
    """A fixed-point solve failed to bracket or to reach its residual tolerance."""
