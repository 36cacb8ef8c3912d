"""cvxpy backend for ConicProblem.

Each Hermitian d x d variable X = A + iB is carried as a real symmetric 2d x 2d
block Y = [[A, -B], [B, A]] constrained PSD with its block structure enforced
by linear equalities. Re Tr[H X] = Tr[emb(H) Y] / 2, so every functional
becomes one sparse row over the stacked column-major entries of the blocks.
"""

import re
import time
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import cvxpy as cp
import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel, ConfigDict

from config import get_settings
from config.settings import SolverSettings
from src.conic.problem import ConicProblem, LinearFunctional
from src.measurements.operators import hermitize
from src.utils.errors import InconclusiveError
from src.utils.logging import get_logger

logger = get_logger(__name__)


class SolveStatus(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"
    INACCURATE = "Inaccurate"


_STATUS_MAP = {
    cp.OPTIMAL: SolveStatus.OPTIMAL,
    cp.INFEASIBLE: SolveStatus.INFEASIBLE,
    cp.UNBOUNDED: SolveStatus.UNBOUNDED,
}


class ConicSolution(BaseModel):
    """Result of one solve; var_values maps labels to complex matrices or floats."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    status: SolveStatus
    objective_value: float
    var_values: Dict[str, Any]
    max_residual: float
    solver: str = ""

    @property
    def is_optimal(self) -> bool:
        return self.status is SolveStatus.OPTIMAL

    def matrix(self, label: str) -> np.ndarray:
        return self.var_values[label]

    def scalar(self, label: str) -> float:
        return float(self.var_values[label])


def embed(matrix: np.ndarray) -> np.ndarray:
    """Real 2d x 2d representation [[Re, -Im], [Im, Re]]."""
    re, im = np.real(matrix), np.imag(matrix)
    return np.block([[re, -im], [im, re]])


def require_optimal(solution: ConicSolution, context: str) -> ConicSolution:
    """Raise InconclusiveError unless the solve is a certified optimum."""
    if not solution.is_optimal:
        raise InconclusiveError(
            f"{context}: solver returned {solution.status.value} (residual {solution.max_residual:.2e})",
            status=solution.status.value,
            residual=solution.max_residual,
        )
    return solution


class ConicSolver:
    """Solve ConicProblem instances with a cvxpy conic backend."""

    def __init__(self, tol: Optional[float] = None, settings: Optional[SolverSettings] = None):
        self.settings = settings or get_settings().solver
        self.tol = float(tol) if tol is not None else self.settings.tol
        if self.tol <= 0:
            raise ValueError(f"solve tolerance must be positive, got {self.tol}")
        self.logger = get_logger(self.__class__.__name__)

    def _backend(self) -> str:
        installed = cp.installed_solvers()
        if self.settings.backend in installed:
            return self.settings.backend
        if self.settings.fallback_backend and self.settings.fallback_backend in installed:
            self.logger.warning(
                "Backend not installed, using fallback",
                backend=self.settings.backend,
                fallback=self.settings.fallback_backend,
            )
            return self.settings.fallback_backend
        raise InconclusiveError(f"no usable conic backend among {installed}", status=SolveStatus.INACCURATE.value)

    def _options(self, backend: str) -> Dict[str, Any]:
        if backend == "CLARABEL":
            return {"tol_gap_abs": self.tol, "tol_gap_rel": self.tol, "tol_feas": self.tol, "max_iter": 500}
        if backend == "SCS":
            return {"eps_abs": self.tol, "eps_rel": self.tol, "max_iters": 200000}
        return {}

    def _layout(self, problem: ConicProblem) -> Tuple[Dict[str, int], int]:
        offsets: Dict[str, int] = {}
        position = 0
        for label, var in problem.psd_vars.items():
            offsets[label] = position
            position += 4 * var.dim * var.dim
        for label in problem.scalar_vars:
            offsets[label] = position
            position += 1
        return offsets, position

    def _row(self, problem: ConicProblem, functional: LinearFunctional, offsets: Dict[str, int]):
        columns: List[int] = []
        values: List[float] = []
        for label, pairing in functional.matrix_terms.items():
            coefficients = 0.5 * embed(pairing).flatten(order="F")
            nonzero = np.flatnonzero(coefficients)
            columns.extend(offsets[label] + nonzero)
            values.extend(coefficients[nonzero])
        for label, c in functional.scalar_terms.items():
            if c != 0.0:
                columns.append(offsets[label])
                values.append(c)
        return columns, values

    def solve(self, problem: ConicProblem) -> ConicSolution:
        start = time.perf_counter()
        if self.settings.dump_dir is not None:
            from src.conic.sdpa import write_sdpa

            safe = re.sub(r"[^A-Za-z0-9_.=-]+", "_", problem.name).strip("_") or "problem"
            write_sdpa(problem, Path(self.settings.dump_dir) / f"{safe}.dat-s")
        offsets, width = self._layout(problem)

        blocks = {}
        constraints = []
        pieces = []
        for label, var in problem.psd_vars.items():
            d = var.dim
            y = cp.Variable((2 * d, 2 * d), symmetric=True, name=label)
            blocks[label] = y
            constraints += [y >> 0, y[:d, :d] == y[d:, d:], y[:d, d:] + y[d:, :d] == 0]
            pieces.append(cp.reshape(y, (4 * d * d,), order="F"))
        scalars = None
        if problem.scalar_vars:
            scalars = cp.Variable(len(problem.scalar_vars), name="scalars")
            pieces.append(scalars)
            for i, var in enumerate(problem.scalar_vars.values()):
                if var.lower is not None:
                    constraints.append(scalars[i] >= var.lower)
        x = cp.hstack(pieces) if len(pieces) > 1 else pieces[0]

        if problem.eq_constraints:
            rows, cols, vals = [], [], []
            rhs = np.zeros(len(problem.eq_constraints))
            for i, (functional, value) in enumerate(problem.eq_constraints):
                c, v = self._row(problem, functional, offsets)
                rows.extend([i] * len(c))
                cols.extend(c)
                vals.extend(v)
                rhs[i] = value
            a = sp.csr_matrix((vals, (rows, cols)), shape=(len(problem.eq_constraints), width))
            constraints.append(cp.Constant(a) @ x == rhs)

        c_cols, c_vals = self._row(problem, problem.objective, offsets)
        cost = np.zeros(width)
        np.add.at(cost, np.asarray(c_cols, dtype=int), c_vals)
        sign = 1.0 if problem.sense == "min" else -1.0
        program = cp.Problem(cp.Minimize(sign * (cost @ x)), constraints)

        backend = self._backend()
        try:
            program.solve(solver=backend, verbose=self.settings.verbose, **self._options(backend))
            raw_status = program.status
        except cp.error.SolverError as e:
            self.logger.warning("Solver error", problem=problem.name, error=str(e))
            raw_status = "solver_error"

        status = _STATUS_MAP.get(raw_status, SolveStatus.INACCURATE)
        values: Dict[str, Any] = {}
        residual = float("inf")
        objective = float("nan")
        if status is SolveStatus.OPTIMAL or raw_status == cp.OPTIMAL_INACCURATE:
            for label, var in problem.psd_vars.items():
                d = var.dim
                y = blocks[label].value
                values[label] = hermitize(y[:d, :d] + 1j * y[d:, :d])
            for i, label in enumerate(problem.scalar_vars):
                values[label] = float(scalars.value[i])
            objective = problem.objective.evaluate(values)
            residual = self.residual(problem, values)
            scale = self._scale(problem, values)
            if status is SolveStatus.OPTIMAL and residual > self.settings.residual_factor * self.tol * scale:
                self.logger.warning(
                    "Optimal status downgraded", problem=problem.name, residual=residual, scale=scale
                )
                status = SolveStatus.INACCURATE

        self.logger.debug(
            "Solved conic problem",
            problem=problem.name,
            backend=backend,
            status=status.value,
            residual=residual,
            seconds=round(time.perf_counter() - start, 4),
            **problem.size,
        )
        return ConicSolution(
            status=status, objective_value=objective, var_values=values, max_residual=residual, solver=backend
        )

    @staticmethod
    def residual(problem: ConicProblem, values: Dict[str, Any]) -> float:
        """Worst equality violation, PSD negativity or lower-bound violation."""
        worst = 0.0
        for functional, rhs in problem.eq_constraints:
            worst = max(worst, abs(functional.evaluate(values) - rhs))
        for label in problem.psd_vars:
            worst = max(worst, -float(np.linalg.eigvalsh(values[label])[0]))
        for label, var in problem.scalar_vars.items():
            if var.lower is not None:
                worst = max(worst, var.lower - values[label])
        return worst

    @staticmethod
    def _scale(problem: ConicProblem, values: Dict[str, Any]) -> float:
        scale = 1.0
        for _, rhs in problem.eq_constraints:
            scale = max(scale, abs(rhs))
        for value in values.values():
            scale = max(scale, float(np.max(np.abs(value))))
        return scale


def solve(problem: ConicProblem, tol: Optional[float] = None) -> ConicSolution:
    """Solve with the configured backend at tolerance tol (settings default)."""
    return ConicSolver(tol=tol).solve(problem)
