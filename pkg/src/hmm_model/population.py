from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Any, Literal, Optional, Union

import numpy as np

from core.logger import info, debug
from hmm_model.errors import ModelError, DimensionError, DivergenceError, ConstructionError
from hmm_model.spec import ModelSpec, Position, STATIONARY, TransitionRecipe, RepresentationRecipe


__all__ = [
    "RegressionPair",
    "PopulationModel",
    "spectral_radius",
    "build_transition_matrix",
    "rescale_to_radius",
    "build_representation_matrix",
    "sigma_z",
    "build_population_model",
    "gaussian_factor",
    "covariance_recipe",
    "coefficient_recipe",
]


MAX_RESAMPLES = 16
SERIES_TOL = 1e-12
SERIES_MAX_TERMS = 200_000
CROSS_CHECK_TOL = 1e-8
SCHUR_PSD_TOL = 1e-10


def _symmetrize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.T)


def spectral_radius(m: np.ndarray) -> float:
    return float(np.max(np.abs(np.linalg.eigvals(m)))) if m.size else 0.0


@dataclass(frozen=True, eq=False)
class RegressionPair:
    """Covariance-matched regression problem y = xB + ε, x ~ N(0, Σ_x), ε ~ N(0, Σ_ε).

    Everything downstream of the generative model (fits, exact risks,
    fixed-point theory, sweeps) only needs this triple.
    """
    sigma_x: np.ndarray
    B: np.ndarray
    sigma_eps: np.ndarray
    sigma_x_eigs: np.ndarray = field(repr=False)
    sigma_x_basis: np.ndarray = field(repr=False)

    @classmethod
    def from_matrices(cls, sigma_x: np.ndarray, B: np.ndarray, sigma_eps: np.ndarray) -> "RegressionPair":
        sigma_x, B, sigma_eps = (np.asarray(m, dtype=float) for m in (sigma_x, B, sigma_eps))
        _check_pair_shapes(sigma_x, B, sigma_eps)
        sigma_x = _symmetrize(sigma_x)
        eigs, basis = _descending_eigh(sigma_x)
        return cls(
            sigma_x=sigma_x,
            B=B,
            sigma_eps=_symmetrize(sigma_eps),
            sigma_x_eigs=eigs,
            sigma_x_basis=basis,
        )

    @classmethod
    def direct(cls, sigma_x: np.ndarray, B: np.ndarray, noise_level: float) -> "RegressionPair":
        """Direct-linear pair with Σ_ε = noise_level·I_d."""
        if noise_level < 0:
            raise ModelError(f"noise level must be nonnegative, got {noise_level}")
        B = np.asarray(B, dtype=float)
        return cls.from_matrices(sigma_x, B, noise_level * np.eye(B.shape[1]))

    @property
    def p(self) -> int:
        return self.sigma_x.shape[0]

    @property
    def d(self) -> int:
        return self.B.shape[1]

    @cached_property
    def trace_sigma_eps(self) -> float:
        return float(np.trace(self.sigma_eps))

    @cached_property
    def sigma_x_sqrt(self) -> np.ndarray:
        # Σ_x^{1/2}
        return (self.sigma_x_basis * np.sqrt(self.sigma_x_eigs)) @ self.sigma_x_basis.T

    @cached_property
    def B_rotated(self) -> np.ndarray:
        """B expressed in the eigenbasis of Σ_x (UᵀB)."""
        return self.sigma_x_basis.T @ self.B

    def null_risk(self) -> float:
        """Risk of the zero estimator, Tr(BᵀΣ_xB)."""
        return float(np.sum(self.sigma_x_eigs[:, None] * self.B_rotated ** 2))

    def signal_to_noise(self) -> float:
        if self.trace_sigma_eps == 0:
            return float("inf")
        return self.null_risk() / self.trace_sigma_eps

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "d": self.d,
            "sigma_x": self.sigma_x.tolist(),
            "B": self.B.tolist(),
            "sigma_eps": self.sigma_eps.tolist(),
            "trace_sigma_eps": self.trace_sigma_eps,
            "sigma_x_eigs": self.sigma_x_eigs.tolist(),
        }


@dataclass(frozen=True, eq=False)
class PopulationModel(RegressionPair):
    A: np.ndarray = field(default=None, repr=False)
    W: np.ndarray = field(default=None, repr=False)
    sigma_z: np.ndarray = field(default=None, repr=False)
    sigma_y: np.ndarray = field(default=None, repr=False)
    sigma_xy: np.ndarray = field(default=None, repr=False)

    def to_dict(self) -> Dict[str, Any]:
        return {
            **super().to_dict(),
            "A": self.A.tolist(),
            "W": self.W.tolist(),
            "sigma_z": self.sigma_z.tolist(),
            "sigma_y": self.sigma_y.tolist(),
            "sigma_xy": self.sigma_xy.tolist(),
        }


def _check_pair_shapes(sigma_x: np.ndarray, B: np.ndarray, sigma_eps: np.ndarray) -> None:
    if sigma_x.ndim != 2 or sigma_x.shape[0] != sigma_x.shape[1]:
        raise DimensionError(f"sigma_x must be square, got shape {sigma_x.shape}")
    if B.ndim != 2 or B.shape[0] != sigma_x.shape[0]:
        raise DimensionError(f"B must be {sigma_x.shape[0]}xd, got shape {B.shape}")
    if sigma_eps.shape != (B.shape[1], B.shape[1]):
        raise DimensionError(f"sigma_eps must be {B.shape[1]}x{B.shape[1]}, got shape {sigma_eps.shape}")


def _descending_eigh(sym: np.ndarray):
    eigs, basis = np.linalg.eigh(sym)
    eigs = np.clip(eigs[::-1], 0.0, None)
    return eigs, basis[:, ::-1].copy()


def rescale_to_radius(m: np.ndarray, rho: float) -> np.ndarray:
    m = np.asarray(m, dtype=float)
    radius = spectral_radius(m)
    if radius <= np.finfo(float).eps * max(1.0, float(np.linalg.norm(m))):
        raise ConstructionError("matrix is nilpotent to machine precision, cannot rescale its spectral radius")
    return m * (rho / radius)


def build_transition_matrix(d: int, rho: float, rng: np.random.Generator) -> np.ndarray:
    """Random d×d transition matrix with spectral radius `rho`.

    Draws i.i.d. standard normal entries and rescales; a draw that is
    nilpotent to machine precision is redrawn up to MAX_RESAMPLES times.
    """
    if d < 1:
        raise DimensionError(f"d must be >= 1, got {d}")
    if not 0 < rho < 1:
        raise ModelError(f"rho must lie in (0, 1), got {rho}")

    for attempt in range(MAX_RESAMPLES):
        try:
            return rescale_to_radius(rng.standard_normal((d, d)), rho)
        except ConstructionError:
            debug(f"transition draw {attempt} is nilpotent, redrawing")

    raise ConstructionError(f"no usable transition matrix after {MAX_RESAMPLES} draws")


def build_representation_matrix(d: int, p: int, rng: np.random.Generator) -> np.ndarray:
    """Random d×p representation matrix, columns rescaled to unit average norm."""
    if d < 1 or p < 1:
        raise DimensionError(f"d and p must be >= 1, got d={d}, p={p}")
    draw = rng.standard_normal((d, p))
    mean_norm = float(np.mean(np.linalg.norm(draw, axis=0)))
    if mean_norm == 0:
        raise ConstructionError("representation draw is identically zero")
    return draw / mean_norm


def sigma_z(A: np.ndarray, position: Position, sigma_eps2: float = 1.0) -> np.ndarray:
    """Covariance of the latent state z at `position`.

    Finite i: I + σ_ε²·Σ_{j=1}^{i−1}(Aʲ)ᵀAʲ + (Aⁱ)ᵀAⁱ, which is the displayed
    Σ_{j=1}^{i}(Aʲ)ᵀAʲ + I at σ_ε² = 1. Stationary: I + σ_ε²·Σ_{j≥1}(Aʲ)ᵀAʲ,
    truncated once a term falls below SERIES_TOL of the running sum.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"A must be square, got shape {A.shape}")
    identity = np.eye(A.shape[0])

    if position == STATIONARY:
        radius = spectral_radius(A)
        if radius >= 1:
            raise DivergenceError(f"stationary covariance diverges: spectral radius {radius:.6g} >= 1")
        total = identity.copy()
        power = identity
        for j in range(1, SERIES_MAX_TERMS + 1):
            power = power @ A
            term = sigma_eps2 * (power.T @ power)
            total += term
            if np.linalg.norm(term) < SERIES_TOL * np.linalg.norm(total):
                debug(f"stationary series truncated after {j} terms")
                return _symmetrize(total)
        raise DivergenceError(f"stationary series not converged after {SERIES_MAX_TERMS} terms")

    i = int(position)
    if i < 0:
        raise ModelError(f"position must be >= 0 or '{STATIONARY}', got {position}")
    if i == 0:
        return identity

    total = identity.copy()
    power = identity
    for _ in range(1, i):
        power = power @ A
        total += sigma_eps2 * (power.T @ power)
    power = power @ A
    total += power.T @ power
    return _symmetrize(total)


def _transition_from_recipe(recipe: TransitionRecipe, d: int, rng: np.random.Generator) -> np.ndarray:
    if recipe.kind == "gaussian":
        return build_transition_matrix(d, recipe.rho, rng)
    A = np.asarray(recipe.matrix, dtype=float)
    if A.shape != (d, d):
        raise DimensionError(f"transition matrix must be {d}x{d}, got {A.shape}")
    return A if recipe.rho is None else rescale_to_radius(A, recipe.rho)


def _representation_from_recipe(recipe: RepresentationRecipe, d: int, p: int, rng: np.random.Generator) -> np.ndarray:
    if recipe.kind == "gaussian":
        return build_representation_matrix(d, p, rng)
    W = np.asarray(recipe.matrix, dtype=float)
    if W.shape != (d, p):
        raise DimensionError(f"representation matrix must be {d}x{p}, got {W.shape}")
    return W


def _relative_gap(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b) / (1.0 + np.linalg.norm(b)))


def build_population_model(spec: ModelSpec) -> PopulationModel:
    """Realize A, W and every population covariance for `spec`.

    B and Σ_ε come from the product forms
        B   = WᵀΣ_z(I + WWᵀΣ_z)⁻¹A
        Σ_ε = σ_ξ²I + Aᵀ(I + Σ_zWWᵀ)⁻¹Σ_zA
    and are cross-checked against Σ_x⁻¹Σ_xy and the Schur complement.
    """
    rng_a, rng_w = (np.random.default_rng(s) for s in np.random.SeedSequence(spec.seed).spawn(2))
    d, p = spec.d, spec.p

    A = _transition_from_recipe(spec.a_recipe, d, rng_a)
    W = _representation_from_recipe(spec.w_recipe, d, p, rng_w)
    sz = sigma_z(A, spec.position, spec.sigma_eps2)

    eye_d = np.eye(d)
    sx = _symmetrize(W.T @ sz @ W + np.eye(p))
    sy = _symmetrize(A.T @ sz @ A + spec.sigma_xi2 * eye_d)
    sxy = W.T @ sz @ A

    B = W.T @ sz @ np.linalg.solve(eye_d + W @ W.T @ sz, A)
    B_regression = np.linalg.solve(sx, sxy)
    gap = _relative_gap(B, B_regression)
    if gap > CROSS_CHECK_TOL:
        raise ConstructionError(f"push-through check failed: relative gap {gap:.3e}")

    s_eps = _symmetrize(spec.sigma_xi2 * eye_d + A.T @ np.linalg.solve(eye_d + sz @ W @ W.T, sz) @ A)
    schur = _symmetrize(sy - sxy.T @ B_regression)
    gap = _relative_gap(s_eps, schur)
    if gap > CROSS_CHECK_TOL:
        raise ConstructionError(f"Schur complement check failed: relative gap {gap:.3e}")

    lam_min = float(np.linalg.eigvalsh(s_eps)[0])
    if lam_min < -SCHUR_PSD_TOL:
        raise ConstructionError(f"noise covariance is not PSD: smallest eigenvalue {lam_min:.3e}")

    eigs, basis = _descending_eigh(sx)
    model = PopulationModel(
        sigma_x=sx,
        B=B,
        sigma_eps=s_eps,
        sigma_x_eigs=eigs,
        sigma_x_basis=basis,
        A=A,
        W=W,
        sigma_z=sz,
        sigma_y=sy,
        sigma_xy=sxy,
    )
    info(
        f"Population model built: d={d}, p={p}, position={spec.position}, "
        f"rho(A)={spectral_radius(A):.4f}, s1={eigs[0]:.4f}, Tr(Sigma_eps)={model.trace_sigma_eps:.4f}"
    )
    return model


def gaussian_factor(cov: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Factor L with L·Lᵀ = cov from the eigendecomposition; round-off negatives clipped.

    Rows g·Lᵀ with g ~ N(0, I) have covariance `cov`.
    """
    cov = _symmetrize(np.asarray(cov, dtype=float))
    eigs, basis = np.linalg.eigh(cov)
    scale = max(1.0, float(np.max(np.abs(eigs)))) if eigs.size else 1.0
    if eigs.size and eigs[0] < -tol * scale:
        raise ConstructionError(f"covariance is not PSD: smallest eigenvalue {eigs[0]:.3e}")
    return basis * np.sqrt(np.clip(eigs, 0.0, None))


def covariance_recipe(
        p: int,
        kind: Literal["identity", "uniform-spectrum"] = "identity",
        low: float = 0.5,
        high: float = 3.0,
        rng: Optional[np.random.Generator] = None
) -> np.ndarray:
    if p < 1:
        raise DimensionError(f"p must be >= 1, got {p}")
    if kind == "identity":
        return np.eye(p)
    if kind != "uniform-spectrum":
        raise ModelError(f"unknown covariance recipe '{kind}'")
    if not 0 < low <= high:
        raise ModelError(f"spectrum bounds must satisfy 0 < low <= high, got [{low}, {high}]")

    rng = rng if rng is not None else np.random.default_rng()
    q, r = np.linalg.qr(rng.standard_normal((p, p)))
    q = q * np.sign(np.diag(r))
    eigs = rng.uniform(low, high, size=p)
    return _symmetrize((q * eigs) @ q.T)


def coefficient_recipe(p: int, d: int, rng: Union[np.random.Generator, None] = None) -> np.ndarray:
    """Gaussian p×d coefficient matrix scaled to unit squared Frobenius norm."""
    if p < 1 or d < 1:
        raise DimensionError(f"p and d must be >= 1, got p={p}, d={d}")
    rng = rng if rng is not None else np.random.default_rng()
    draw = rng.standard_normal((p, d))
    return draw / np.linalg.norm(draw)
