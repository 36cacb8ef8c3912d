"""Canonical vector-outcome parent POVM blocks shared by the membership SDPs."""

from typing import List, Optional, Sequence

import numpy as np

from src.conic.problem import ConicProblem, HermitianExpression, LinearFunctional
from src.conic.solver import ConicSolution
from src.measurements.noise import noise_split
from src.measurements.outcomes import Label, label_key, marginal_groups, outcome_tuples


class ParentBlock:
    """PSD variables G[a_1,...,a_k], one per outcome vector, on dimension dim.

    The marginal for position p and outcome a is the sum of G over labels with
    a_p = a.
    """

    def __init__(self, problem: ConicProblem, prefix: str, dim: int, counts: Sequence[int]):
        self.dim = dim
        self.counts = tuple(counts)
        self.outcomes: List[Label] = outcome_tuples(self.counts)
        self.groups = marginal_groups(self.counts)
        self.labels = [problem.add_matrix_variable(label_key(prefix, o), dim) for o in self.outcomes]

    def marginal(
        self, position: int, outcome: int, coefficient: float = 1.0, into: Optional[HermitianExpression] = None
    ) -> HermitianExpression:
        expr = into if into is not None else HermitianExpression(self.dim)
        if coefficient == 0.0:
            return expr
        for index in self.groups[(position, outcome)]:
            expr.add_variable(self.labels[index], coefficient)
        return expr

    def total(self) -> HermitianExpression:
        expr = HermitianExpression(self.dim)
        for label in self.labels:
            expr.add_variable(label)
        return expr

    def require_complete(self, problem: ConicProblem, weight_label: Optional[str] = None) -> None:
        """Sum of effects equals the identity, or weight * identity."""
        identity = np.eye(self.dim, dtype=complex)
        if weight_label is None:
            problem.add_matrix_equality(self.total(), identity)
        else:
            problem.add_matrix_equality(self.total().add_scalar(weight_label, -identity))

    def values(self, solution: ConicSolution) -> List[np.ndarray]:
        return [solution.matrix(label) for label in self.labels]


def noisy_effect(effect: np.ndarray, eta_label: str) -> HermitianExpression:
    """eta * (M - Tr[M] 1/d) + Tr[M] 1/d as an expression affine in eta."""
    traceless, trivial = noise_split(effect)
    return HermitianExpression(effect.shape[0], trivial).add_scalar(eta_label, traceless)


def declare_visibility(problem: ConicProblem, eta_label: str = "eta") -> str:
    """eta in [0, 1], written as eta >= 0 and eta + u = 1 with u >= 0."""
    problem.add_scalar_variable(eta_label, lower=0.0)
    slack = problem.add_scalar_variable(f"{eta_label}:slack", lower=0.0)
    problem.add_equality(LinearFunctional(scalar_terms={eta_label: 1.0, slack: 1.0}), 1.0)
    problem.maximize(LinearFunctional(scalar_terms={eta_label: 1.0}))
    return eta_label
