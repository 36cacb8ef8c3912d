"""Classical pre-processings p(x'|x) and the inclusive-endpoint grid over them."""

import itertools
import math
from fractions import Fraction
from typing import Iterator, List, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_serializer, model_validator

from src.utils.errors import InvalidInputError

ROW_TOL = 1e-12


class PreProcessing(BaseModel):
    """Row-stochastic m x n matrix with entry [x, x'] = p(x'|x)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    probs: np.ndarray

    @model_validator(mode="before")
    @classmethod
    def coerce(cls, data):
        if isinstance(data, dict) and "probs" in data:
            data = dict(data)
            probs = np.array(data["probs"], dtype=float, copy=True)
            probs.setflags(write=False)
            data["probs"] = probs
        return data

    @model_validator(mode="after")
    def check_stochastic(self):
        p = self.probs
        if p.ndim != 2 or p.shape[0] < 1 or p.shape[1] < 1:
            raise ValueError(f"pre-processing must be a non-empty m x n matrix, got shape {p.shape}")
        if np.any(p < -ROW_TOL):
            raise ValueError("pre-processing has negative entries")
        if not np.allclose(p.sum(axis=1), 1.0, rtol=0.0, atol=ROW_TOL):
            raise ValueError(f"rows do not sum to 1: {p.sum(axis=1).tolist()}")
        return self

    @field_serializer("probs")
    def serialize_probs(self, probs: np.ndarray):
        return probs.tolist()

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "PreProcessing":
        try:
            return cls(probs=rows)
        except (ValidationError, ValueError) as e:
            raise InvalidInputError(str(e)) from e

    @classmethod
    def deterministic(cls, assignment: Sequence[int], n: int) -> "PreProcessing":
        """x -> f(x) with f(x) = assignment[x] in range(n)."""
        probs = np.zeros((len(assignment), n))
        for x, target in enumerate(assignment):
            if not 0 <= target < n:
                raise InvalidInputError(f"setting {x} assigned to {target}, outside range({n})")
            probs[x, target] = 1.0
        return cls(probs=probs)

    @classmethod
    def uniform(cls, m: int, n: int) -> "PreProcessing":
        return cls(probs=np.full((m, n), 1.0 / n))

    @property
    def settings(self) -> int:
        return self.probs.shape[0]

    @property
    def simulators(self) -> int:
        return self.probs.shape[1]

    def is_deterministic(self) -> bool:
        return bool(np.all((np.abs(self.probs) < ROW_TOL) | (np.abs(self.probs - 1.0) < ROW_TOL)))


class GridSpec(BaseModel):
    """Grid {0, s, 2s, ..., 1} on every free coordinate, with step s <= ell."""

    model_config = ConfigDict(frozen=True)

    ell: float = Field(gt=0.0, le=1.0)

    @property
    def points(self) -> int:
        return math.ceil(1.0 / self.ell - 1e-9) + 1

    @property
    def step(self) -> float:
        return 1.0 / (self.points - 1)

    def values(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.points)

    def nearest(self, value: float) -> float:
        return float(self.values()[int(round(value / self.step))])

    def floor(self, value: float) -> float:
        return float(self.values()[int(math.floor(value / self.step + 1e-12))])

    def pre_processings(self, m: int, n: int) -> Iterator[PreProcessing]:
        """Every grid pre-processing, lexicographic in the free coordinates.

        The free coordinates are p(x'|x) for x' < n - 1; the last column is
        fixed by normalization, and points outside the simplex are skipped.
        """
        if n == 1:
            yield PreProcessing(probs=np.ones((m, 1)))
            return
        values = self.values()
        if n == 2:
            for point in itertools.product(values, repeat=m):
                column = np.asarray(point)
                yield PreProcessing(probs=np.stack([column, 1.0 - column], axis=1))
            return
        for point in itertools.product(values, repeat=m * (n - 1)):
            free = np.asarray(point).reshape(m, n - 1)
            remainder = 1.0 - free.sum(axis=1)
            if np.any(remainder < -ROW_TOL):
                continue
            yield PreProcessing(probs=np.hstack([free, np.clip(remainder, 0.0, None)[:, None]]))

    def count(self, m: int, n: int) -> int:
        if n == 1:
            return 1
        if n == 2:
            return self.points ** m
        # compositions of at most (points - 1) steps into n - 1 free parts, per row
        per_row = math.comb(self.points - 1 + n - 1, n - 1)
        return per_row ** m

    def round(self, pre: PreProcessing) -> PreProcessing:
        """Grid point used by the epsilon bound for an arbitrary pre-processing."""
        n = pre.simulators
        if n == 1:
            return pre
        if n == 2:
            column = np.array([self.nearest(v) for v in pre.probs[:, 0]])
            return PreProcessing(probs=np.stack([column, 1.0 - column], axis=1))
        free = np.array([[self.floor(v) for v in row[:-1]] for row in pre.probs])
        remainder = np.clip(1.0 - free.sum(axis=1), 0.0, None)
        return PreProcessing(probs=np.hstack([free, remainder[:, None]]))


def grid_epsilon(ell: float, outcome_counts: Sequence[int], n: int) -> float:
    """Worst-case change of the fixed-pre-processing distance between a point and its grid point.

    n = 2 rounds the free coordinate to the nearest grid point: (ell/2) * sum_x k_x * n.
    n >= 3 floors the free coordinates onto the simplex grid, moving each row by at most
    2(n - 1) ell in l1: 2(n - 1) * ell * sum_x k_x. n = 1 has a single point, so 0.
    """
    # decimal arithmetic so that e.g. ell = 0.02 on the Paulis gives exactly 0.12
    step = Fraction(repr(float(ell)))
    total = sum(int(k) for k in outcome_counts)
    if n == 1:
        return 0.0
    if n == 2:
        return float(step / 2 * total * n)
    return float(2 * (n - 1) * step * total)


def rows_as_list(pre: PreProcessing) -> List[List[float]]:
    return [[float(v) for v in row] for row in pre.probs]
