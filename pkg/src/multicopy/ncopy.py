"""n-copy joint measurability.

A parent G on (C^d)^{(x)n} with vector outcomes reproduces M when
Tr[F_{x,a} rho^{(x)n}] = Tr[M_{a|x} rho] for every state, where F_{x,a} sums G
over outcome vectors with a_x = a. Expanding rho = (1 + sum_k r_k B_k)/d turns
this into linear equalities on the coefficients of each monomial in r.
"""

import itertools
from functools import reduce
from typing import Any, Dict, Iterator, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from config import get_settings
from src.conic import ConicProblem, ConicSolver, require_optimal
from src.conic.parents import ParentBlock, declare_visibility
from src.measurements import Assemblage, Visibility
from src.measurements.codec import operator_to_json
from src.measurements.operators import min_eigenvalue, operator_norm
from src.measurements.outcomes import Label, outcome_tuples
from src.multicopy.basis import gell_mann_basis, monomial_pairings
from src.utils.errors import DimensionGuardError, InvalidInputError
from src.utils.logging import get_logger

logger = get_logger(__name__)

WITNESS_TOL = 1e-6


class MultiCopyParent(BaseModel):
    """Parent POVM acting on n copies of a d-dimensional system."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n_copies: int
    dim: int
    outcome_labels: Tuple[Label, ...]
    effects: Tuple[np.ndarray, ...]

    @model_validator(mode="after")
    def check_povm(self):
        size = self.dim ** self.n_copies
        if len(self.effects) != len(self.outcome_labels) or not self.effects:
            raise ValueError("need one effect per outcome label")
        for label, effect in zip(self.outcome_labels, self.effects):
            if effect.shape != (size, size):
                raise ValueError(f"effect {label} has shape {effect.shape}, expected {(size, size)}")
            if min_eigenvalue(effect) < -WITNESS_TOL:
                raise ValueError(f"effect {label} is not PSD")
        if operator_norm(sum(self.effects) - np.eye(size)) > WITNESS_TOL:
            raise ValueError("effects do not sum to the identity")
        return self

    def marginal(self, position: int, outcome: int) -> np.ndarray:
        size = self.dim ** self.n_copies
        total = np.zeros((size, size), dtype=complex)
        for label, effect in zip(self.outcome_labels, self.effects):
            if label[position] == outcome:
                total = total + effect
        return total


def check_dimension(d: int, n: int, max_dim: Optional[int] = None) -> None:
    limit = max_dim if max_dim is not None else get_settings().multicopy.max_dim
    if n < 1:
        raise InvalidInputError(f"n must be at least 1, got {n}")
    if d ** n > limit:
        raise DimensionGuardError(f"d**n = {d ** n} exceeds the multi-copy guard {limit}")


def _coefficient_targets(effect: np.ndarray, n: int, pairings) -> Iterator[Tuple[np.ndarray, float, float]]:
    """(P, c, e) with the constraint Re Tr[P F] = c + e * eta for the monomial of P."""
    d = effect.shape[0]
    basis = gell_mann_basis(d)
    scale = float(d ** (n - 1))
    for key, pairing in pairings:
        if len(key) == 0:
            yield pairing, scale * float(np.real(np.trace(effect))), 0.0
        elif len(key) == 1:
            yield pairing, 0.0, scale * float(np.real(np.trace(effect @ basis.elements[key[0] - 1])))
        else:
            yield pairing, 0.0, 0.0


def ncopy_visibility_with_parent(
    assemblage: Assemblage,
    n: int,
    tol: Optional[float] = None,
    max_dim: Optional[int] = None,
) -> Tuple[Visibility, MultiCopyParent]:
    """Largest eta with the depolarized assemblage n-copy jointly measurable, and its parent."""
    d = assemblage.dim
    check_dimension(d, n, max_dim)
    pairings = monomial_pairings(d, n)

    problem = ConicProblem(name=f"ncopy-visibility(n={n})")
    eta = declare_visibility(problem)
    parent = ParentBlock(problem, "G", d ** n, assemblage.outcome_counts)
    parent.require_complete(problem)
    for x, k in enumerate(assemblage.outcome_counts):
        # the last outcome follows from completeness
        for a in range(k - 1):
            marginal = parent.marginal(x, a)
            for pairing, constant, slope in _coefficient_targets(assemblage.effect(x, a), n, pairings):
                functional = marginal.pair(pairing)
                if slope != 0.0:
                    functional.add_scalar(eta, -slope)
                problem.add_equality(functional, constant)

    solution = require_optimal(ConicSolver(tol=tol).solve(problem), problem.name)
    visibility = Visibility.clipped(solution.scalar(eta))
    witness = MultiCopyParent(
        n_copies=n, dim=d, outcome_labels=tuple(parent.outcomes), effects=tuple(parent.values(solution))
    )
    logger.info("n-copy visibility", n=n, d=d, eta=visibility.eta)
    return visibility, witness


def ncopy_visibility(
    assemblage: Assemblage, n: int, tol: Optional[float] = None, max_dim: Optional[int] = None
) -> Visibility:
    visibility, _ = ncopy_visibility_with_parent(assemblage, n, tol, max_dim)
    return visibility


def ncopy_feasible(
    assemblage: Assemblage, n: int, tol: Optional[float] = None, max_dim: Optional[int] = None
) -> Tuple[bool, Optional[MultiCopyParent]]:
    """Member iff the optimal visibility reaches 1 within the membership margin."""
    visibility, parent = ncopy_visibility_with_parent(assemblage, n, tol, max_dim)
    member = visibility.eta >= 1.0 - get_settings().solver.membership_margin
    logger.info("n-copy joint measurability decided", n=n, eta=visibility.eta, member=member)
    return (True, parent) if member else (False, None)


def _random_state(d: int, rng: np.random.Generator) -> np.ndarray:
    w = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = w @ w.conj().T
    return rho / np.real(np.trace(rho))


def verify_multicopy_statistics(
    assemblage: Assemblage, parent: MultiCopyParent, trials: Optional[int] = None, seed: Optional[int] = None
) -> float:
    """max over random states and (a, x) of |Tr[M rho] - Tr[F rho^{(x)n}]|."""
    settings = get_settings().multicopy
    trials = trials if trials is not None else settings.trials
    rng = np.random.default_rng(seed if seed is not None else settings.seed)
    if parent.dim != assemblage.dim:
        raise InvalidInputError(f"parent acts on copies of d={parent.dim}, assemblage on d={assemblage.dim}")
    if any(len(label) != assemblage.settings for label in parent.outcome_labels):
        raise InvalidInputError(f"parent labels must have {assemblage.settings} coordinates")

    marginals = {
        (x, a): parent.marginal(x, a)
        for x, k in enumerate(assemblage.outcome_counts)
        for a in range(k)
    }
    worst = 0.0
    for _ in range(trials):
        rho = _random_state(assemblage.dim, rng)
        copies = reduce(np.kron, [rho] * parent.n_copies)
        for (x, a), f in marginals.items():
            expected = np.real(np.trace(assemblage.effect(x, a) @ rho))
            observed = np.real(np.trace(f @ copies))
            worst = max(worst, abs(expected - observed))
    return float(worst)


def product_parent(assemblage: Assemblage) -> MultiCopyParent:
    """One measurement per copy: G_(a_1..a_m) = M_{a_1|1} (x) ... (x) M_{a_m|m}."""
    labels = outcome_tuples(assemblage.outcome_counts)
    effects = tuple(
        reduce(np.kron, [assemblage.effect(x, a) for x, a in enumerate(label)]) for label in labels
    )
    return MultiCopyParent(
        n_copies=assemblage.settings, dim=assemblage.dim, outcome_labels=tuple(labels), effects=effects
    )


def _permute_slots(matrix: np.ndarray, d: int, n: int, order: Sequence[int]) -> np.ndarray:
    tensor = matrix.reshape((d,) * (2 * n))
    axes = list(order) + [n + s for s in order]
    return tensor.transpose(axes).reshape(d ** n, d ** n)


def symmetrize_parent(parent: MultiCopyParent) -> MultiCopyParent:
    """Average every effect over permutations of the n copies."""
    d, n = parent.dim, parent.n_copies
    orders = list(itertools.permutations(range(n)))
    effects = tuple(
        sum(_permute_slots(effect, d, n, order) for order in orders) / len(orders) for effect in parent.effects
    )
    return MultiCopyParent(n_copies=n, dim=d, outcome_labels=parent.outcome_labels, effects=effects)


def parent_to_json(parent: MultiCopyParent) -> Dict[str, Any]:
    return {
        "n_copies": parent.n_copies,
        "d": parent.dim,
        "outcome_labels": [list(label) for label in parent.outcome_labels],
        "effects": [operator_to_json(e) for e in parent.effects],
    }
