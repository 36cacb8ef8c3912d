"""Small complex semidefinite programs: problem model, solve contract and SDPA dump."""

from .problem import (
    ConicProblem,
    HermitianExpression,
    LinearFunctional,
    MatrixVariable,
    ScalarVariable,
    operator_interval_constraint,
)
from .sdpa import write_sdpa
from .solver import ConicSolution, ConicSolver, SolveStatus, require_optimal, solve

__all__ = [
    "ConicProblem",
    "HermitianExpression",
    "LinearFunctional",
    "MatrixVariable",
    "ScalarVariable",
    "operator_interval_constraint",
    "ConicSolution",
    "ConicSolver",
    "SolveStatus",
    "require_optimal",
    "solve",
    "write_sdpa",
]
