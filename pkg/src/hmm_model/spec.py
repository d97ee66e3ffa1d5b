from pathlib import Path
from typing import List, Literal, Optional, Union

import ujson as json

from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, model_validator


__all__ = [
    "DataMode",
    "Position",
    "STATIONARY",
    "TransitionRecipe",
    "RepresentationRecipe",
    "ModelSpec",
    "read_model_spec",
    "write_model_spec",
]


STATIONARY = "stationary"

DataMode = Literal["hmm-sequence", "iid-gaussian", "direct-linear"]
Position = Union[NonNegativeInt, Literal["stationary"]]

Matrix = List[List[float]]


class TransitionRecipe(BaseModel):
    """How the d×d transition matrix A is produced.

    gaussian: i.i.d. N(0, 1) entries rescaled to spectral radius `rho`.
    explicit: `matrix` taken as given; rescaled to `rho` when `rho` is set.
    """
    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["gaussian", "explicit"] = "gaussian"
    rho: Optional[float] = Field(0.9, gt=0, lt=1, description="Target spectral radius of A")
    matrix: Optional[Matrix] = Field(None, description="Row-major A for the explicit recipe")

    @model_validator(mode="after")
    def _check_kind(self) -> "TransitionRecipe":
        if self.kind == "explicit" and self.matrix is None:
            raise ValueError("explicit transition recipe requires 'matrix'")
        if self.kind == "gaussian" and self.rho is None:
            raise ValueError("gaussian transition recipe requires 'rho'")
        return self


class RepresentationRecipe(BaseModel):
    """How the d×p representation matrix W is produced.

    gaussian: i.i.d. N(0, 1) entries, columns rescaled to unit average norm.
    explicit: `matrix` taken as given.
    """
    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: Literal["gaussian", "explicit"] = "gaussian"
    matrix: Optional[Matrix] = Field(None, description="Row-major W for the explicit recipe")

    @model_validator(mode="after")
    def _check_kind(self) -> "RepresentationRecipe":
        if self.kind == "explicit" and self.matrix is None:
            raise ValueError("explicit representation recipe requires 'matrix'")
        return self


class ModelSpec(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    d: int = Field(..., ge=1, description="Token dimension")
    p: int = Field(..., ge=1, description="Representation dimension")
    sigma_eps2: float = Field(1.0, gt=0, description="Markov innovation variance")
    sigma_xi2: float = Field(1.0, gt=0, description="Target noise variance")
    position: Position = Field(STATIONARY, description="Token index i or 'stationary'")
    a_recipe: TransitionRecipe = Field(default_factory=TransitionRecipe)
    w_recipe: RepresentationRecipe = Field(default_factory=RepresentationRecipe)
    seed: int = Field(0, ge=0, lt=2 ** 64, description="Root seed for matrix construction")

    @model_validator(mode="after")
    def _check_shapes(self) -> "ModelSpec":
        if self.a_recipe.matrix is not None:
            rows = len(self.a_recipe.matrix)
            if rows != self.d or any(len(r) != self.d for r in self.a_recipe.matrix):
                raise ValueError(f"a_recipe.matrix must be {self.d}x{self.d}")
        if self.w_recipe.matrix is not None:
            rows = len(self.w_recipe.matrix)
            if rows != self.d or any(len(r) != self.p for r in self.w_recipe.matrix):
                raise ValueError(f"w_recipe.matrix must be {self.d}x{self.p}")
        return self

    @property
    def stationary(self) -> bool:
        return self.position == STATIONARY


def write_model_spec(spec: ModelSpec, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as f:
        f.write(json.dumps(spec.model_dump(mode="json"), indent=2))


def read_model_spec(path: Path) -> ModelSpec:
    with Path(path).open("r") as f:
        return ModelSpec.model_validate(json.loads(f.read()))
