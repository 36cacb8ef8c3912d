"""n-wise compatibility: convex mixtures of blockwise jointly measurable assemblages.

Every partition C_i carries a weight w_i and one subnormalized parent per block
whose effects sum to w_i * 1, so the mixture is linear in the variables.
"""

from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from config import get_settings
from src.conic import (
    ConicProblem,
    ConicSolver,
    HermitianExpression,
    LinearFunctional,
    operator_interval_constraint,
    require_optimal,
)
from src.conic.parents import ParentBlock, declare_visibility, noisy_effect
from src.jm import jm_feasible, jm_visibility
from src.measurements import Assemblage, Visibility
from src.measurements.codec import operator_to_json
from src.measurements.operators import operator_norm
from src.measurements.outcomes import Label
from src.structures.partitions import PartitionCollection, enumerate_partitions
from src.utils.errors import InvalidInputError
from src.utils.logging import get_logger

logger = get_logger(__name__)


class BlockParent(BaseModel):
    """Subnormalized parent for one block; labels have one coordinate per block setting."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    block: Tuple[int, ...]
    outcome_labels: Tuple[Label, ...]
    effects: Tuple[np.ndarray, ...]

    def marginal(self, position: int, outcome: int) -> np.ndarray:
        d = self.effects[0].shape[0]
        total = np.zeros((d, d), dtype=complex)
        for label, effect in zip(self.outcome_labels, self.effects):
            if label[position] == outcome:
                total = total + effect
        return total


class DecompositionTerm(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    partition: PartitionCollection
    weight: float
    parents: Tuple[BlockParent, ...]

    def effect(self, x: int, a: int) -> np.ndarray:
        b, position = self.partition.locate(x)
        return self.parents[b].marginal(position, a)


class ConvexDecomposition(BaseModel):
    """sum_i of blockwise jointly measurable, w_i-weighted terms."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    terms: Tuple[DecompositionTerm, ...]

    @property
    def total_weight(self) -> float:
        return float(sum(term.weight for term in self.terms))


class _Mixture:
    """Weights and block parents for every partition, declared on one problem."""

    def __init__(self, problem: ConicProblem, assemblage: Assemblage, partitions: Sequence[PartitionCollection]):
        self.assemblage = assemblage
        self.partitions = list(partitions)
        self.weights: List[str] = []
        self.blocks: List[List[ParentBlock]] = []
        weight_sum = LinearFunctional()
        counts = assemblage.outcome_counts
        for i, partition in enumerate(self.partitions):
            weight = problem.add_scalar_variable(f"w{i}", lower=0.0)
            weight_sum.add_scalar(weight, 1.0)
            parents = []
            for j, block in enumerate(partition.blocks):
                parent = ParentBlock(problem, f"T{i}B{j}", assemblage.dim, [counts[x] for x in block])
                parent.require_complete(problem, weight_label=weight)
                parents.append(parent)
            self.weights.append(weight)
            self.blocks.append(parents)
        problem.add_equality(weight_sum, 1.0)

    def reconstruction(self, x: int, a: int) -> HermitianExpression:
        expr = HermitianExpression(self.assemblage.dim)
        for partition, parents in zip(self.partitions, self.blocks):
            b, position = partition.locate(x)
            parents[b].marginal(position, a, into=expr)
        return expr

    def decomposition(self, solution) -> ConvexDecomposition:
        terms = []
        for partition, weight, parents in zip(self.partitions, self.weights, self.blocks):
            block_parents = tuple(
                BlockParent(block=block, outcome_labels=tuple(parent.outcomes), effects=tuple(parent.values(solution)))
                for block, parent in zip(partition.blocks, parents)
            )
            terms.append(
                DecompositionTerm(partition=partition, weight=max(0.0, solution.scalar(weight)), parents=block_parents)
            )
        return ConvexDecomposition(terms=tuple(terms))


def _partitions(assemblage: Assemblage, n: int, partitions: Optional[Sequence[PartitionCollection]]):
    if partitions is not None:
        if not partitions:
            raise InvalidInputError("at least one partition is required")
        for partition in partitions:
            if partition.m != assemblage.settings or partition.block_count > n:
                raise InvalidInputError(
                    f"partition {partition} is not a cover of {assemblage.settings} settings in <= {n} blocks"
                )
        return list(partitions)
    return enumerate_partitions(assemblage.settings, n)


def nwise_distance(
    assemblage: Assemblage,
    n: int,
    partitions: Optional[Sequence[PartitionCollection]] = None,
    tol: Optional[float] = None,
) -> Tuple[float, ConvexDecomposition]:
    """Assemblage-norm distance to the n-wise compatible set and the closest mixture."""
    problem = ConicProblem(name=f"nwise-distance(n={n})")
    mixture = _Mixture(problem, assemblage, _partitions(assemblage, n, partitions))
    objective = LinearFunctional()
    for x, k in enumerate(assemblage.outcome_counts):
        for a in range(k):
            gap = HermitianExpression(assemblage.dim, assemblage.effect(x, a)) - mixture.reconstruction(x, a)
            label = f"lambda[{a}|{x}]"
            operator_interval_constraint(problem, gap, label)
            objective.add_scalar(label, 1.0)
    problem.minimize(objective)
    solution = require_optimal(ConicSolver(tol=tol).solve(problem), problem.name)
    return max(0.0, solution.objective_value), mixture.decomposition(solution)


def nwise_feasible(
    assemblage: Assemblage, n: int, tol: Optional[float] = None
) -> Tuple[bool, Optional[ConvexDecomposition]]:
    """Membership in the convex hull of blockwise jointly measurable assemblages."""
    nu, decomposition = nwise_distance(assemblage, n, tol=tol)
    member = nu <= get_settings().solver.membership_margin
    logger.info("n-wise compatibility decided", n=n, distance=nu, member=member)
    return (True, decomposition) if member else (False, None)


def nwise_visibility(
    assemblage: Assemblage,
    n: int,
    partitions: Optional[Sequence[PartitionCollection]] = None,
    tol: Optional[float] = None,
) -> Visibility:
    """Largest eta with the depolarized assemblage n-wise compatible, one SDP maximizing eta."""
    problem = ConicProblem(name=f"nwise-visibility(n={n})")
    eta = declare_visibility(problem)
    mixture = _Mixture(problem, assemblage, _partitions(assemblage, n, partitions))
    for x, k in enumerate(assemblage.outcome_counts):
        for a in range(k - 1):
            problem.add_matrix_equality(mixture.reconstruction(x, a) - noisy_effect(assemblage.effect(x, a), eta))
    solution = require_optimal(ConicSolver(tol=tol).solve(problem), problem.name)
    visibility = Visibility.clipped(solution.scalar(eta))
    logger.info("n-wise compatibility visibility", n=n, eta=visibility.eta)
    return visibility


def verify_decomposition(assemblage: Assemblage, decomposition: ConvexDecomposition) -> float:
    """Worst of reconstruction, block-completeness and weight-sum residuals."""
    d = assemblage.dim
    residual = abs(decomposition.total_weight - 1.0)
    for term in decomposition.terms:
        if term.partition.m != assemblage.settings:
            raise InvalidInputError(f"term partition {term.partition} does not cover {assemblage.settings} settings")
        for parent in term.parents:
            if parent.effects[0].shape[0] != d:
                raise InvalidInputError("block parent dimension does not match the assemblage")
            residual = max(residual, operator_norm(sum(parent.effects) - term.weight * np.eye(d)))
    for x, k in enumerate(assemblage.outcome_counts):
        for a in range(k):
            rebuilt = sum(term.effect(x, a) for term in decomposition.terms)
            residual = max(residual, operator_norm(assemblage.effect(x, a) - rebuilt))
    return residual


def decomposition_to_json(decomposition: ConvexDecomposition) -> Dict[str, Any]:
    return {
        "terms": [
            {
                "partition": term.partition.one_based(),
                "weight": term.weight,
                "blocks": [
                    {
                        "settings": [x + 1 for x in parent.block],
                        "outcome_labels": [list(label) for label in parent.outcome_labels],
                        "effects": [operator_to_json(e) for e in parent.effects],
                    }
                    for parent in term.parents
                ],
            }
            for term in decomposition.terms
        ]
    }


def pairwise_compatible(
    assemblage: Assemblage, tol: Optional[float] = None
) -> Tuple[bool, Optional[Tuple[int, int]]]:
    """Every pair of settings jointly measurable; otherwise the first failing pair."""
    m = assemblage.settings
    for s in range(m):
        for t in range(s + 1, m):
            feasible, _ = jm_feasible(assemblage, [s, t], tol=tol)
            if not feasible:
                return False, (s, t)
    return True, None


def pairwise_visibility(assemblage: Assemblage, tol: Optional[float] = None) -> Visibility:
    """min over pairs of settings of the pair's joint measurability visibility."""
    m = assemblage.settings
    value = 1.0
    for s in range(m):
        for t in range(s + 1, m):
            value = min(value, jm_visibility(assemblage, [s, t], tol=tol).eta)
    return Visibility.clipped(value)
