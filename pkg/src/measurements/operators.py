"""Value types for effects, measurements and assemblages."""

from typing import List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_serializer, model_validator

from src.utils.errors import InvalidInputError

HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-9
COMPLETENESS_TOL = 1e-9


def min_eigenvalue(matrix: np.ndarray) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    return float(np.linalg.eigvalsh(matrix)[0])


def operator_norm(matrix: np.ndarray) -> float:
    """Largest absolute eigenvalue of a Hermitian matrix."""
    if matrix.size == 0:
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvalsh(matrix))))


def hermitize(matrix: np.ndarray) -> np.ndarray:
    """Symmetrize away round-off so the result is exactly Hermitian."""
    matrix = np.asarray(matrix, dtype=complex)
    return (matrix + matrix.conj().T) / 2


def _frozen(matrix: np.ndarray) -> np.ndarray:
    matrix = np.array(matrix, dtype=complex, copy=True)
    matrix.setflags(write=False)
    return matrix


def matrix_to_pairs(matrix: np.ndarray) -> List[List[List[float]]]:
    return [[[float(z.real), float(z.imag)] for z in row] for row in matrix]


class HermitianOp(BaseModel):
    """A d x d complex Hermitian matrix."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    matrix: np.ndarray

    @model_validator(mode="before")
    @classmethod
    def coerce(cls, data):
        if isinstance(data, dict) and "matrix" in data:
            data = dict(data)
            data["matrix"] = _frozen(data["matrix"])
        return data

    @model_validator(mode="after")
    def check_hermitian(self):
        m = self.matrix
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise ValueError(f"operator must be a non-empty square matrix, got shape {m.shape}")
        if not np.allclose(m, m.conj().T, rtol=0.0, atol=HERMITIAN_TOL):
            raise ValueError("operator is not Hermitian within 1e-12")
        return self

    @field_serializer("matrix")
    def serialize_matrix(self, matrix: np.ndarray):
        return matrix_to_pairs(matrix)

    @classmethod
    def from_array(cls, matrix) -> "HermitianOp":
        try:
            return cls(matrix=matrix)
        except ValidationError as e:
            raise InvalidInputError(str(e)) from e

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def norm(self) -> float:
        return operator_norm(self.matrix)


class Measurement(BaseModel):
    """A POVM: PSD effects summing to the identity."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    effects: Tuple[HermitianOp, ...]

    @model_validator(mode="after")
    def check_povm(self):
        if len(self.effects) < 1:
            raise ValueError("a measurement needs at least one effect")
        dims = {e.dim for e in self.effects}
        if len(dims) != 1:
            raise ValueError(f"effects have mixed dimensions {sorted(dims)}")
        d = dims.pop()
        for a, effect in enumerate(self.effects):
            lowest = min_eigenvalue(effect.matrix)
            if lowest < -PSD_TOL:
                raise ValueError(f"effect {a} is not PSD (min eigenvalue {lowest:.3e})")
        total = sum(e.matrix for e in self.effects)
        if not np.allclose(total, np.eye(d), rtol=0.0, atol=COMPLETENESS_TOL):
            raise ValueError("effects do not sum to the identity within 1e-9")
        return self

    @classmethod
    def from_arrays(cls, matrices: Sequence[np.ndarray]) -> "Measurement":
        try:
            return cls(effects=tuple(HermitianOp(matrix=m) for m in matrices))
        except ValidationError as e:
            raise InvalidInputError(str(e)) from e

    @property
    def dim(self) -> int:
        return self.effects[0].dim

    @property
    def outcomes(self) -> int:
        return len(self.effects)


class Assemblage(BaseModel):
    """An ordered family of m measurements on a common dimension."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    measurements: Tuple[Measurement, ...]

    @model_validator(mode="after")
    def check_shape(self):
        if len(self.measurements) < 1:
            raise ValueError("an assemblage needs at least one measurement")
        dims = {mmt.dim for mmt in self.measurements}
        if len(dims) != 1:
            raise ValueError(f"measurements have mixed dimensions {sorted(dims)}")
        return self

    @classmethod
    def from_arrays(cls, effects: Sequence[Sequence[np.ndarray]]) -> "Assemblage":
        """Build from nested effects, ``effects[x][a]``."""
        try:
            measurements = tuple(
                Measurement(effects=tuple(HermitianOp(matrix=m) for m in row)) for row in effects
            )
            return cls(measurements=measurements)
        except ValidationError as e:
            raise InvalidInputError(str(e)) from e

    @property
    def dim(self) -> int:
        return self.measurements[0].dim

    @property
    def settings(self) -> int:
        return len(self.measurements)

    @property
    def outcome_counts(self) -> Tuple[int, ...]:
        return tuple(mmt.outcomes for mmt in self.measurements)

    def effect(self, x: int, a: int) -> np.ndarray:
        return self.measurements[x].effects[a].matrix

    def arrays(self) -> List[List[np.ndarray]]:
        return [[e.matrix for e in mmt.effects] for mmt in self.measurements]

    def same_shape(self, other: "Assemblage") -> bool:
        return self.dim == other.dim and self.outcome_counts == other.outcome_counts


class Visibility(BaseModel):
    """Depolarizing visibility eta in [0, 1]."""

    model_config = ConfigDict(frozen=True)

    eta: float = Field(ge=0.0, le=1.0)

    @classmethod
    def clipped(cls, value: float) -> "Visibility":
        """Wrap a solver optimum, absorbing round-off just outside [0, 1]."""
        return cls(eta=float(min(1.0, max(0.0, value))))

    def __float__(self) -> float:
        return self.eta


class SubnormalizedStateAssemblage(BaseModel):
    """Sub-normalized states ``states[x][a]`` sharing one reduced state."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    states: Tuple[Tuple[HermitianOp, ...], ...]

    @model_validator(mode="after")
    def check_no_signaling(self):
        if not self.states or not self.states[0]:
            raise ValueError("state assemblage is empty")
        reduced = None
        for x, row in enumerate(self.states):
            for a, state in enumerate(row):
                lowest = min_eigenvalue(state.matrix)
                if lowest < -PSD_TOL:
                    raise ValueError(f"state ({a}|{x}) is not PSD (min eigenvalue {lowest:.3e})")
            marginal = sum(s.matrix for s in row)
            if reduced is None:
                reduced = marginal
            elif not np.allclose(marginal, reduced, rtol=0.0, atol=PSD_TOL):
                raise ValueError(f"marginal of setting {x} differs from setting 0")
        return self

    @property
    def dim(self) -> int:
        return self.states[0][0].dim

    def reduced_state(self) -> np.ndarray:
        return sum(s.matrix for s in self.states[0])
