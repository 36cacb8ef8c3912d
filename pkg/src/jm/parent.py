"""Joint measurability: parent POVMs, membership, distance and critical visibility."""

from typing import Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from config import get_settings
from src.conic import ConicProblem, ConicSolver, require_optimal
from src.conic.parents import ParentBlock, declare_visibility, noisy_effect
from src.measurements import Assemblage, Visibility, restrict
from src.measurements.builders import PAULI_X, PAULI_Z
from src.measurements.codec import operator_to_json
from src.measurements.operators import min_eigenvalue, operator_norm
from src.measurements.outcomes import Label, outcome_tuples
from src.simgrid.distance import sim_fixed_pre_distance
from src.simgrid.preprocessing import PreProcessing
from src.utils.errors import InvalidInputError
from src.utils.logging import get_logger

logger = get_logger(__name__)

# solver-produced witnesses are accepted up to this slack
WITNESS_TOL = 1e-6


class ParentPovm(BaseModel):
    """Parent POVM with one effect per outcome vector (a_1, ..., a_k)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    outcome_labels: Tuple[Label, ...]
    effects: Tuple[np.ndarray, ...]

    @model_validator(mode="after")
    def check_povm(self):
        if len(self.outcome_labels) != len(self.effects) or not self.effects:
            raise ValueError("need one effect per outcome label")
        d = self.effects[0].shape[0]
        for label, effect in zip(self.outcome_labels, self.effects):
            if min_eigenvalue(effect) < -WITNESS_TOL:
                raise ValueError(f"parent effect {label} is not PSD")
        if operator_norm(sum(self.effects) - np.eye(d)) > WITNESS_TOL:
            raise ValueError("parent effects do not sum to the identity")
        return self

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    def marginal(self, position: int, outcome: int) -> np.ndarray:
        total = np.zeros((self.dim, self.dim), dtype=complex)
        for label, effect in zip(self.outcome_labels, self.effects):
            if label[position] == outcome:
                total = total + effect
        return total

    def to_json(self):
        return {
            "outcome_labels": [list(label) for label in self.outcome_labels],
            "effects": [operator_to_json(e) for e in self.effects],
        }


def noisy_xz_parent(eta: float) -> ParentPovm:
    """Parent 1/4 (1 + eta (i sigma_x + j sigma_z)), i, j = +/-1, for noisy sigma_x and sigma_z.

    Outcome 0 is the +1 eigenvalue, matching make_pauli_assemblage.
    """
    labels = outcome_tuples((2, 2))
    signs = {0: 1.0, 1: -1.0}
    effects = tuple(
        (np.eye(2) + eta * (signs[a] * PAULI_X + signs[b] * PAULI_Z)) / 4 for a, b in labels
    )
    return ParentPovm(outcome_labels=tuple(labels), effects=effects)


def _restricted(assemblage: Assemblage, subset: Optional[Sequence[int]]) -> Assemblage:
    if subset is None:
        return assemblage
    return restrict(assemblage, subset)


def jm_distance(assemblage: Assemblage, subset: Optional[Sequence[int]] = None, tol: Optional[float] = None) -> float:
    """Assemblage-norm distance from the selected settings to the jointly measurable set."""
    target = _restricted(assemblage, subset)
    nu, _ = sim_fixed_pre_distance(target, 1, PreProcessing(probs=np.ones((target.settings, 1))), tol=tol)
    return nu


def jm_feasible(
    assemblage: Assemblage, subset: Optional[Sequence[int]] = None, tol: Optional[float] = None
) -> Tuple[bool, Optional[ParentPovm]]:
    """Decide joint measurability of the selected settings; returns a parent when it holds."""
    target = _restricted(assemblage, subset)
    margin = get_settings().solver.membership_margin
    nu, simulators = sim_fixed_pre_distance(target, 1, PreProcessing(probs=np.ones((target.settings, 1))), tol=tol)
    member = nu <= margin
    logger.info("Joint measurability decided", settings=target.settings, distance=nu, member=member)
    if not member:
        return False, None
    parent = ParentPovm(outcome_labels=simulators.outcome_labels, effects=simulators.effects[0])
    return True, parent


def jm_visibility(
    assemblage: Assemblage, subset: Optional[Sequence[int]] = None, tol: Optional[float] = None
) -> Visibility:
    """Largest eta with the depolarized selection jointly measurable, from one SDP maximizing eta."""
    target = _restricted(assemblage, subset)
    if target.settings == 1:
        return Visibility(eta=1.0)

    problem = ConicProblem(name=f"jm-visibility(m={target.settings})")
    eta = declare_visibility(problem)
    parent = ParentBlock(problem, "G", target.dim, target.outcome_counts)
    parent.require_complete(problem)
    for x, k in enumerate(target.outcome_counts):
        for a in range(k - 1):
            problem.add_matrix_equality(parent.marginal(x, a) - noisy_effect(target.effect(x, a), eta))

    solution = require_optimal(ConicSolver(tol=tol).solve(problem), problem.name)
    visibility = Visibility.clipped(solution.scalar(eta))
    logger.info("Joint measurability visibility", settings=target.settings, eta=visibility.eta)
    return visibility


def verify_parent(assemblage: Assemblage, subset: Optional[Sequence[int]], parent: ParentPovm) -> float:
    """Largest operator-norm gap between a parent marginal and the effect it should reproduce."""
    target = _restricted(assemblage, subset)
    if parent.dim != target.dim:
        raise InvalidInputError(f"parent acts on d={parent.dim}, assemblage on d={target.dim}")
    if any(len(label) != target.settings for label in parent.outcome_labels):
        raise InvalidInputError(f"parent labels must have {target.settings} coordinates")
    residual = 0.0
    for x, k in enumerate(target.outcome_counts):
        for a in range(k):
            residual = max(residual, operator_norm(parent.marginal(x, a) - target.effect(x, a)))
    return residual
