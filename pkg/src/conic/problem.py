"""Backend-independent model of small complex semidefinite programs.

Every Hermitian variable X is PSD. A real-linear functional of the variables
is written as a set of Hermitian pairing matrices H (value Re Tr[H X]) plus
real coefficients on scalar variables plus a constant.
"""

from typing import Dict, Iterator, List, Mapping, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.measurements.operators import HERMITIAN_TOL
from src.utils.errors import InvalidInputError

Value = Union[float, np.ndarray]


class MatrixVariable(BaseModel):
    """A d x d Hermitian PSD matrix variable."""

    model_config = ConfigDict(frozen=True)

    label: str
    dim: int = Field(ge=1)


class ScalarVariable(BaseModel):
    """A real variable, optionally bounded below."""

    model_config = ConfigDict(frozen=True)

    label: str
    lower: Optional[float] = None


class LinearFunctional:
    """sum_X Re Tr[H_X X] + sum_s c_s s + constant."""

    def __init__(
        self,
        matrix_terms: Optional[Mapping[str, np.ndarray]] = None,
        scalar_terms: Optional[Mapping[str, float]] = None,
        constant: float = 0.0,
    ):
        self.matrix_terms: Dict[str, np.ndarray] = {
            k: np.asarray(v, dtype=complex) for k, v in (matrix_terms or {}).items()
        }
        self.scalar_terms: Dict[str, float] = {k: float(v) for k, v in (scalar_terms or {}).items()}
        self.constant = float(constant)

    def add_matrix(self, label: str, pairing: np.ndarray) -> "LinearFunctional":
        pairing = np.asarray(pairing, dtype=complex)
        if label in self.matrix_terms:
            self.matrix_terms[label] = self.matrix_terms[label] + pairing
        else:
            self.matrix_terms[label] = pairing
        return self

    def add_scalar(self, label: str, coefficient: float) -> "LinearFunctional":
        self.scalar_terms[label] = self.scalar_terms.get(label, 0.0) + float(coefficient)
        return self

    def evaluate(self, values: Mapping[str, Value]) -> float:
        total = self.constant
        for label, pairing in self.matrix_terms.items():
            total += float(np.real(np.trace(pairing @ values[label])))
        for label, coefficient in self.scalar_terms.items():
            total += coefficient * float(values[label])
        return total


class HermitianExpression:
    """Affine Hermitian-valued expression.

    constant + sum_X c_X X + sum_s s H_s, with real c_X on matrix variables and
    fixed Hermitian H_s on scalar variables.
    """

    def __init__(self, dim: int, constant: Optional[np.ndarray] = None):
        self.dim = dim
        self.constant = (
            np.zeros((dim, dim), dtype=complex) if constant is None else np.asarray(constant, dtype=complex)
        )
        self.matrix_terms: Dict[str, float] = {}
        self.scalar_terms: Dict[str, np.ndarray] = {}

    @classmethod
    def of_variable(cls, label: str, dim: int, coefficient: float = 1.0) -> "HermitianExpression":
        return cls(dim).add_variable(label, coefficient)

    def add_variable(self, label: str, coefficient: float = 1.0) -> "HermitianExpression":
        self.matrix_terms[label] = self.matrix_terms.get(label, 0.0) + float(coefficient)
        return self

    def add_scalar(self, label: str, matrix: np.ndarray) -> "HermitianExpression":
        matrix = np.asarray(matrix, dtype=complex)
        if label in self.scalar_terms:
            self.scalar_terms[label] = self.scalar_terms[label] + matrix
        else:
            self.scalar_terms[label] = matrix
        return self

    def add_constant(self, matrix: np.ndarray) -> "HermitianExpression":
        self.constant = self.constant + np.asarray(matrix, dtype=complex)
        return self

    def scaled(self, factor: float) -> "HermitianExpression":
        out = HermitianExpression(self.dim, factor * self.constant)
        out.matrix_terms = {k: factor * v for k, v in self.matrix_terms.items()}
        out.scalar_terms = {k: factor * v for k, v in self.scalar_terms.items()}
        return out

    def __add__(self, other: "HermitianExpression") -> "HermitianExpression":
        if other.dim != self.dim:
            raise InvalidInputError(f"cannot add expressions of dims {self.dim} and {other.dim}")
        out = self.scaled(1.0)
        out.add_constant(other.constant)
        for label, c in other.matrix_terms.items():
            out.add_variable(label, c)
        for label, h in other.scalar_terms.items():
            out.add_scalar(label, h)
        return out

    def __neg__(self) -> "HermitianExpression":
        return self.scaled(-1.0)

    def __sub__(self, other: "HermitianExpression") -> "HermitianExpression":
        return self + (-other)

    def pair(self, pairing: np.ndarray) -> LinearFunctional:
        """Re Tr[P expr] as a linear functional."""
        functional = LinearFunctional(constant=float(np.real(np.trace(pairing @ self.constant))))
        for label, c in self.matrix_terms.items():
            if c != 0.0:
                functional.add_matrix(label, c * pairing)
        for label, h in self.scalar_terms.items():
            functional.add_scalar(label, float(np.real(np.trace(pairing @ h))))
        return functional

    def evaluate(self, values: Mapping[str, Value]) -> np.ndarray:
        total = self.constant.copy()
        for label, c in self.matrix_terms.items():
            total = total + c * values[label]
        for label, h in self.scalar_terms.items():
            total = total + float(values[label]) * h
        return total


def hermitian_basis(d: int) -> Iterator[np.ndarray]:
    """d**2 Hermitian matrices whose pairings determine any Hermitian matrix."""
    for j in range(d):
        e = np.zeros((d, d), dtype=complex)
        e[j, j] = 1.0
        yield e
    for j in range(d):
        for k in range(j + 1, d):
            e = np.zeros((d, d), dtype=complex)
            e[j, k] = e[k, j] = 1.0
            yield e
            e = np.zeros((d, d), dtype=complex)
            e[j, k] = -1j
            e[k, j] = 1j
            yield e


class ConicProblem:
    """Hermitian PSD variables, real scalars, affine equalities and a linear objective."""

    def __init__(self, name: str = "problem"):
        self.name = name
        self.psd_vars: Dict[str, MatrixVariable] = {}
        self.scalar_vars: Dict[str, ScalarVariable] = {}
        self.eq_constraints: List[Tuple[LinearFunctional, float]] = []
        self.objective = LinearFunctional()
        self.sense = "min"

    def add_matrix_variable(self, label: str, dim: int) -> str:
        if label in self.psd_vars or label in self.scalar_vars:
            raise InvalidInputError(f"variable '{label}' declared twice in {self.name}")
        self.psd_vars[label] = MatrixVariable(label=label, dim=dim)
        return label

    def add_scalar_variable(self, label: str, lower: Optional[float] = None) -> str:
        if label in self.psd_vars or label in self.scalar_vars:
            raise InvalidInputError(f"variable '{label}' declared twice in {self.name}")
        self.scalar_vars[label] = ScalarVariable(label=label, lower=lower)
        return label

    def _check(self, functional: LinearFunctional) -> None:
        for label, pairing in functional.matrix_terms.items():
            if label not in self.psd_vars:
                raise InvalidInputError(f"undeclared matrix variable '{label}' in {self.name}")
            d = self.psd_vars[label].dim
            if pairing.shape != (d, d):
                raise InvalidInputError(f"pairing for '{label}' has shape {pairing.shape}, expected {(d, d)}")
            if not np.allclose(pairing, pairing.conj().T, rtol=0.0, atol=HERMITIAN_TOL):
                raise InvalidInputError(f"pairing for '{label}' is not Hermitian")
        for label in functional.scalar_terms:
            if label not in self.scalar_vars:
                raise InvalidInputError(f"undeclared scalar variable '{label}' in {self.name}")

    def add_equality(self, functional: LinearFunctional, rhs: float) -> None:
        self._check(functional)
        # constants are folded into the right-hand side
        homogeneous = LinearFunctional(functional.matrix_terms, functional.scalar_terms)
        self.eq_constraints.append((homogeneous, float(rhs) - functional.constant))

    def add_matrix_equality(self, expr: HermitianExpression, target: Optional[np.ndarray] = None) -> None:
        """expr == target, expanded over a Hermitian basis into d**2 real equalities."""
        if target is None:
            target = np.zeros((expr.dim, expr.dim), dtype=complex)
        for basis_element in hermitian_basis(expr.dim):
            rhs = float(np.real(np.trace(basis_element @ target)))
            self.add_equality(expr.pair(basis_element), rhs)

    def minimize(self, functional: LinearFunctional) -> None:
        self._check(functional)
        self.objective = functional
        self.sense = "min"

    def maximize(self, functional: LinearFunctional) -> None:
        self._check(functional)
        self.objective = functional
        self.sense = "max"

    @property
    def size(self) -> Dict[str, int]:
        return {
            "matrix_vars": len(self.psd_vars),
            "scalar_vars": len(self.scalar_vars),
            "equalities": len(self.eq_constraints),
        }


def operator_interval_constraint(problem: ConicProblem, expr: HermitianExpression, lambda_label: str) -> None:
    """Impose -lambda 1 <= expr <= lambda 1 through two PSD slacks."""
    d = expr.dim
    if lambda_label not in problem.scalar_vars:
        problem.add_scalar_variable(lambda_label, lower=0.0)
    upper = problem.add_matrix_variable(f"{lambda_label}:up", d)
    lower = problem.add_matrix_variable(f"{lambda_label}:lo", d)
    identity = np.eye(d, dtype=complex)

    above = HermitianExpression(d).add_scalar(lambda_label, identity) - expr
    above.add_variable(upper, -1.0)
    problem.add_matrix_equality(above)

    below = HermitianExpression(d).add_scalar(lambda_label, identity) + expr
    below.add_variable(lower, -1.0)
    problem.add_matrix_equality(below)
