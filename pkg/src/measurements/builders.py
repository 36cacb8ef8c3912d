"""Constructors for named, projective and random assemblages."""

from typing import Dict, Sequence

import numpy as np

from src.measurements.operators import Assemblage, hermitize
from src.utils.errors import InvalidInputError
from src.utils.logging import get_logger

logger = get_logger(__name__)

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_X, PAULI_Y, PAULI_Z)

AXIS_TOL = 1e-12

# Frozen builtin orderings; scenario files refer to settings by position.
BUILTIN_AXES: Dict[str, Sequence[Sequence[float]]] = {
    "pauli-xyz": ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)),
    "pauli-xz": ((1.0, 0.0, 0.0), (0.0, 0.0, 1.0)),
    "xzh": ((1.0, 0.0, 0.0), (0.0, 0.0, 1.0), (1 / np.sqrt(2), 0.0, 1 / np.sqrt(2))),
}


def bloch_operator(axis: Sequence[float]) -> np.ndarray:
    """n . sigma for a real 3-vector n."""
    return sum(float(c) * s for c, s in zip(axis, PAULIS))


def make_pauli_assemblage(axes: Sequence[Sequence[float]]) -> Assemblage:
    """Binary projective qubit measurements (1 +/- n.sigma)/2, one per axis."""
    effects = []
    for i, axis in enumerate(axes):
        axis = np.asarray(axis, dtype=float)
        if axis.shape != (3,):
            raise InvalidInputError(f"axis {i} must be a 3-vector, got shape {axis.shape}")
        if abs(np.linalg.norm(axis) - 1.0) > AXIS_TOL:
            raise InvalidInputError(f"axis {i} is not a unit vector (norm {np.linalg.norm(axis):.15f})")
        n_sigma = bloch_operator(axis)
        identity = np.eye(2, dtype=complex)
        effects.append([(identity + n_sigma) / 2, (identity - n_sigma) / 2])
    if not effects:
        raise InvalidInputError("at least one axis is required")
    return Assemblage.from_arrays(effects)


def builtin_assemblage(name: str) -> Assemblage:
    """Named assemblage: pauli-xyz, pauli-xz or xzh."""
    if name not in BUILTIN_AXES:
        raise InvalidInputError(f"unknown builtin assemblage '{name}', expected one of {sorted(BUILTIN_AXES)}")
    return make_pauli_assemblage(BUILTIN_AXES[name])


def _inverse_sqrt(matrix: np.ndarray) -> np.ndarray:
    values, vectors = np.linalg.eigh(matrix)
    return (vectors * (1.0 / np.sqrt(values))) @ vectors.conj().T


def random_povm(d: int, k: int, rng: np.random.Generator) -> list:
    """Full-rank POVM from k complex Ginibre matrices, S^-1/2 W W^dag S^-1/2."""
    positives = []
    for _ in range(k):
        w = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        positives.append(w @ w.conj().T)
    root = _inverse_sqrt(sum(positives))
    return [hermitize(root @ p @ root) for p in positives]


def random_assemblage(d: int, m: int, k: int, seed: int) -> Assemblage:
    """Seeded random assemblage of m k-outcome POVMs on dimension d."""
    if d < 2 or m < 1 or k < 2:
        raise InvalidInputError(f"need d >= 2, m >= 1, k >= 2 (got d={d}, m={m}, k={k})")
    rng = np.random.default_rng(seed)
    return Assemblage.from_arrays([random_povm(d, k, rng) for _ in range(m)])


def restrict(assemblage: Assemblage, subset: Sequence[int]) -> Assemblage:
    """Sub-assemblage on the given (0-based) settings, in the given order."""
    subset = list(subset)
    if not subset:
        raise InvalidInputError("subset must be nonempty")
    if len(set(subset)) != len(subset):
        raise InvalidInputError(f"subset has repeated settings: {subset}")
    for x in subset:
        if not 0 <= x < assemblage.settings:
            raise InvalidInputError(f"setting {x} out of range for m={assemblage.settings}")
    return Assemblage(measurements=tuple(assemblage.measurements[x] for x in subset))


def permute_outcomes(assemblage: Assemblage, permutations: Sequence[Sequence[int]]) -> Assemblage:
    """Relabel outcomes: new effect a of setting x is old effect permutations[x][a]."""
    if len(permutations) != assemblage.settings:
        raise InvalidInputError("one permutation per setting is required")
    effects = []
    for x, perm in enumerate(permutations):
        if sorted(perm) != list(range(assemblage.outcome_counts[x])):
            raise InvalidInputError(f"permutation {list(perm)} is not a relabeling of setting {x}")
        effects.append([assemblage.effect(x, a) for a in perm])
    return Assemblage.from_arrays(effects)
