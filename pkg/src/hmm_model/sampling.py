from dataclasses import dataclass, field
from typing import Dict, Any, Optional, Tuple, TypeAlias, Union

import numpy as np

from numba import jit

from core.logger import warn
from hmm_model.errors import DimensionError, ModelError
from hmm_model.population import RegressionPair, PopulationModel, gaussian_factor
from hmm_model.spec import DataMode, ModelSpec


__all__ = [
    "Dataset",
    "SeedLike",
    "make_rng",
    "resolve_rng",
    "sample_sequence",
    "sample_iid_rows",
    "sample_direct_linear",
    "sample_dataset",
]


SeedLike: TypeAlias = Union[int, np.random.Generator]


@dataclass(frozen=True, eq=False)
class Dataset:
    X: np.ndarray
    Y: np.ndarray
    mode: DataMode
    seed: int
    latent: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    @property
    def d(self) -> int:
        return self.Y.shape[1]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "p": self.p,
            "d": self.d,
            "mode": self.mode,
            "seed": self.seed,
            "X": self.X.tolist(),
            "Y": self.Y.tolist(),
        }


def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """Generator for the stream addressed by `keys` under root `seed`.

    Streams with distinct keys are independent and do not depend on the
    order in which they are created.
    """
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in keys)))


def resolve_rng(rng: SeedLike) -> Tuple[np.random.Generator, int]:
    if isinstance(rng, np.random.Generator):
        seed_seq = getattr(rng.bit_generator, "seed_seq", None)
        entropy = getattr(seed_seq, "entropy", None)
        return rng, int(entropy) if isinstance(entropy, int) else 0
    seed = int(rng)
    if not 0 <= seed < 2 ** 64:
        raise ModelError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return make_rng(seed), seed


@jit(nopython=True)
def _markov_chain(z0, A, innovations):
    """z_0 = z0, z_k = z_{k-1}·A + innovations[k] for k >= 1."""
    steps, d = innovations.shape
    out = np.empty((steps, d))
    for j in range(d):
        out[0, j] = z0[j]
    for k in range(1, steps):
        for j in range(d):
            acc = innovations[k, j]
            for l in range(d):
                acc += out[k - 1, l] * A[l, j]
            out[k, j] = acc
    return out


def sample_sequence(
        model: PopulationModel,
        spec: ModelSpec,
        length: int,
        rng: SeedLike,
        burn_in: int = 0
) -> Dataset:
    """One Markov chain z_0..z_{n-1}, z_0 ~ N(0, I); rows x = zW + u, y = zA + ξ.

    Rows are correlated and their covariance drifts toward stationarity, so
    this mode does not satisfy the fixed-Σ_x assumption of the theory.
    """
    if length < 1:
        raise DimensionError(f"length must be >= 1, got {length}")
    if burn_in < 0:
        raise ModelError(f"burn_in must be >= 0, got {burn_in}")
    if model.A.shape[0] != spec.d or model.W.shape[1] != spec.p:
        raise DimensionError("model and spec dimensions disagree")

    gen, seed = resolve_rng(rng)
    d, p = spec.d, spec.p
    steps = burn_in + length

    z0 = gen.standard_normal(d)
    innovations = np.sqrt(spec.sigma_eps2) * gen.standard_normal((steps, d))
    Z = _markov_chain(z0, np.ascontiguousarray(model.A), innovations)[burn_in:]

    U = gen.standard_normal((length, p))
    Xi = np.sqrt(spec.sigma_xi2) * gen.standard_normal((length, d))

    warn("hmm-sequence rows are serially correlated; theory curves assume i.i.d. rows")
    return Dataset(
        X=Z @ model.W + U,
        Y=Z @ model.A + Xi,
        mode="hmm-sequence",
        seed=seed,
        latent=Z,
    )


def sample_iid_rows(model: RegressionPair, n: int, rng: SeedLike) -> Dataset:
    """Rows x ~ N(0, Σ_x), y = xB + ε with ε ~ N(0, Σ_ε), all i.i.d."""
    if n < 1:
        raise DimensionError(f"n must be >= 1, got {n}")
    gen, seed = resolve_rng(rng)

    X = gen.standard_normal((n, model.p)) @ gaussian_factor(model.sigma_x).T
    E = gen.standard_normal((n, model.d)) @ gaussian_factor(model.sigma_eps).T
    return Dataset(X=X, Y=X @ model.B + E, mode="iid-gaussian", seed=seed)


def sample_direct_linear(
        sigma_x: np.ndarray,
        B: np.ndarray,
        sigma_eps_scalar: float,
        n: int,
        rng: SeedLike
) -> Dataset:
    """Rows x ~ N(0, Σ_x), y = xB + ε with ε ~ N(0, σ²I_d); σ² = 0 gives Y = XB."""
    if n < 1:
        raise DimensionError(f"n must be >= 1, got {n}")
    if sigma_eps_scalar < 0:
        raise ModelError(f"noise variance must be >= 0, got {sigma_eps_scalar}")
    sigma_x = np.asarray(sigma_x, dtype=float)
    B = np.asarray(B, dtype=float)
    if B.shape[0] != sigma_x.shape[0]:
        raise DimensionError(f"B has {B.shape[0]} rows, sigma_x is {sigma_x.shape[0]}x{sigma_x.shape[0]}")
    gen, seed = resolve_rng(rng)

    X = gen.standard_normal((n, sigma_x.shape[0])) @ gaussian_factor(sigma_x).T
    E = np.sqrt(sigma_eps_scalar) * gen.standard_normal((n, B.shape[1]))
    return Dataset(X=X, Y=X @ B + E, mode="direct-linear", seed=seed)


def sample_dataset(
        model: RegressionPair,
        mode: DataMode,
        n: int,
        rng: SeedLike,
        spec: Optional[ModelSpec] = None,
        noise_level: Optional[float] = None
) -> Dataset:
    match mode:
        case "hmm-sequence":
            if spec is None or not isinstance(model, PopulationModel):
                raise ModelError("hmm-sequence sampling needs a PopulationModel and its ModelSpec")
            return sample_sequence(model, spec, n, rng)
        case "iid-gaussian":
            return sample_iid_rows(model, n, rng)
        case "direct-linear":
            level = noise_level if noise_level is not None else model.trace_sigma_eps / model.d
            return sample_direct_linear(model.sigma_x, model.B, level, n, rng)
        case _:
            raise ModelError(f"unknown data mode '{mode}'")
