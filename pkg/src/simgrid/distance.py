"""Distance and visibility SDPs for simulation by a fixed pre-processing.

n simulator POVMs carry vector outcomes (a_1, ..., a_m); post-processing is
the canonical q(a|x, a') = delta(a, a'_x), so the simulated effect is
sum_x' p(x'|x) sum_{a': a'_x = a} N_{a'|x'}.
"""

from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from src.conic import (
    ConicProblem,
    ConicSolver,
    HermitianExpression,
    LinearFunctional,
    operator_interval_constraint,
    require_optimal,
)
from src.conic.parents import ParentBlock, declare_visibility, noisy_effect
from src.measurements import Assemblage, Visibility
from src.measurements.outcomes import Label
from src.simgrid.preprocessing import PreProcessing
from src.utils.errors import InvalidInputError
from src.utils.logging import get_logger

logger = get_logger(__name__)

# pre-processing weights below this are treated as zero
WEIGHT_CUTOFF = 1e-15


class SimulatorFamily(BaseModel):
    """Witness simulators: effects[x'][i] for outcome vector outcome_labels[i]."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    outcome_labels: Tuple[Label, ...]
    effects: Tuple[Tuple[np.ndarray, ...], ...]

    def simulated(self, pre: PreProcessing, counts) -> List[List[np.ndarray]]:
        """Effects sum_x' p(x'|x) sum_{a': a'_x = a} N_{a'|x'}."""
        d = self.effects[0][0].shape[0]
        out = []
        for x, k in enumerate(counts):
            row = []
            for a in range(k):
                total = np.zeros((d, d), dtype=complex)
                for x_prime, block in enumerate(self.effects):
                    weight = pre.probs[x, x_prime]
                    for label, effect in zip(self.outcome_labels, block):
                        if label[x] == a:
                            total = total + weight * effect
                row.append(total)
            out.append(row)
        return out


def _check_shape(assemblage: Assemblage, n: int, pre: PreProcessing) -> None:
    if n < 1:
        raise InvalidInputError(f"n must be at least 1, got {n}")
    if pre.probs.shape != (assemblage.settings, n):
        raise InvalidInputError(
            f"pre-processing has shape {pre.probs.shape}, expected {(assemblage.settings, n)}"
        )


def _simulated_marginal(
    blocks: List[ParentBlock], pre: PreProcessing, x: int, a: int, dim: int
) -> HermitianExpression:
    expr = HermitianExpression(dim)
    for x_prime, block in enumerate(blocks):
        weight = float(pre.probs[x, x_prime])
        if weight > WEIGHT_CUTOFF:
            block.marginal(x, a, weight, into=expr)
    return expr


def _declare_simulators(problem: ConicProblem, assemblage: Assemblage, n: int) -> List[ParentBlock]:
    blocks = []
    for x_prime in range(n):
        block = ParentBlock(problem, f"N{x_prime}", assemblage.dim, assemblage.outcome_counts)
        block.require_complete(problem)
        blocks.append(block)
    return blocks


def _witness(blocks: List[ParentBlock], solution) -> SimulatorFamily:
    return SimulatorFamily(
        outcome_labels=tuple(blocks[0].outcomes),
        effects=tuple(tuple(block.values(solution)) for block in blocks),
    )


def sim_fixed_pre_distance(
    assemblage: Assemblage, n: int, pre: PreProcessing, tol: Optional[float] = None
) -> Tuple[float, SimulatorFamily]:
    """nu_p: least sum of operator-norm gaps between A and any simulation with pre.

    Raises InconclusiveError when the solver does not certify an optimum.
    """
    _check_shape(assemblage, n, pre)
    problem = ConicProblem(name=f"sim-fixed-distance(n={n})")
    blocks = _declare_simulators(problem, assemblage, n)

    objective = LinearFunctional()
    for x, k in enumerate(assemblage.outcome_counts):
        for a in range(k):
            gap = HermitianExpression(assemblage.dim, assemblage.effect(x, a))
            gap = gap - _simulated_marginal(blocks, pre, x, a, assemblage.dim)
            label = f"lambda[{a}|{x}]"
            operator_interval_constraint(problem, gap, label)
            objective.add_scalar(label, 1.0)
    problem.minimize(objective)

    solution = require_optimal(ConicSolver(tol=tol).solve(problem), problem.name)
    nu = max(0.0, solution.objective_value)
    logger.debug("Fixed pre-processing distance", n=n, nu=nu)
    return nu, _witness(blocks, solution)


def sim_fixed_pre_visibility(
    assemblage: Assemblage, n: int, pre: PreProcessing, tol: Optional[float] = None
) -> Visibility:
    """Largest eta for which the depolarized assemblage is simulated exactly with pre."""
    _check_shape(assemblage, n, pre)
    problem = ConicProblem(name=f"sim-fixed-visibility(n={n})")
    eta = declare_visibility(problem)
    blocks = _declare_simulators(problem, assemblage, n)

    for x, k in enumerate(assemblage.outcome_counts):
        # the last outcome follows from completeness
        for a in range(k - 1):
            target = noisy_effect(assemblage.effect(x, a), eta)
            problem.add_matrix_equality(_simulated_marginal(blocks, pre, x, a, assemblage.dim) - target)

    solution = require_optimal(ConicSolver(tol=tol).solve(problem), problem.name)
    visibility = Visibility.clipped(solution.scalar(eta))
    logger.info("Fixed pre-processing visibility", n=n, eta=visibility.eta)
    return visibility
