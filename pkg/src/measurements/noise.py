"""Depolarizing noise, the assemblage norm and the steering map."""

from typing import Sequence, Tuple, Union

import numpy as np

from src.measurements.operators import (
    Assemblage,
    HermitianOp,
    SubnormalizedStateAssemblage,
    Visibility,
    operator_norm,
)
from src.utils.errors import InvalidInputError

EffectFamily = Union[Assemblage, Sequence[Sequence[np.ndarray]]]


def noise_split(effect: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Split M into (M - Tr[M] 1/d, Tr[M] 1/d), so M^eta = eta*first + second."""
    d = effect.shape[0]
    trivial = np.trace(effect).real * np.eye(d, dtype=complex) / d
    return effect - trivial, trivial


def depolarize(assemblage: Assemblage, visibility: Union[Visibility, float]) -> Assemblage:
    """M^eta_{a|x} = eta M_{a|x} + (1 - eta) Tr[M_{a|x}] 1/d."""
    if not isinstance(visibility, Visibility):
        visibility = Visibility(eta=float(visibility))
    eta = visibility.eta
    noisy = []
    for row in assemblage.arrays():
        new_row = []
        for effect in row:
            traceless, trivial = noise_split(effect)
            new_row.append(eta * traceless + trivial)
        noisy.append(new_row)
    return Assemblage.from_arrays(noisy)


def _as_arrays(family: EffectFamily):
    if isinstance(family, Assemblage):
        return family.arrays()
    return [[np.asarray(e, dtype=complex) for e in row] for row in family]


def assemblage_norm(family: EffectFamily) -> float:
    """Sum of operator norms over every effect.

    Accepts raw nested effects too, so differences of assemblages (which are
    not POVMs) can be measured.
    """
    return float(sum(operator_norm(e) for row in _as_arrays(family) for e in row))


def assemblage_distance(first: Assemblage, second: Assemblage) -> float:
    """||first - second||_A for assemblages of the same shape."""
    if not first.same_shape(second):
        raise InvalidInputError(
            f"shape mismatch: d={first.dim}/{second.dim}, outcomes {first.outcome_counts}/{second.outcome_counts}"
        )
    difference = [
        [e1 - e2 for e1, e2 in zip(r1, r2)] for r1, r2 in zip(first.arrays(), second.arrays())
    ]
    return assemblage_norm(difference)


def steering_assemblage(assemblage: Assemblage) -> SubnormalizedStateAssemblage:
    """States prepared on the maximally entangled state: M^T / d."""
    d = assemblage.dim
    states = tuple(
        tuple(HermitianOp(matrix=effect.T / d) for effect in row) for row in assemblage.arrays()
    )
    return SubnormalizedStateAssemblage(states=states)


def measurements_from_steering(states: SubnormalizedStateAssemblage) -> Assemblage:
    """Invert the maximally entangled steering map, M = d * sigma^T."""
    d = states.dim
    if not np.allclose(states.reduced_state(), np.eye(d) / d, rtol=0.0, atol=1e-9):
        raise InvalidInputError("reduced state is not maximally mixed; not a maximally entangled assemblage")
    return Assemblage.from_arrays([[d * s.matrix.T for s in row] for row in states.states])
