"""Traceless Hermitian operator bases and their tensor placements."""

import itertools
from functools import lru_cache, reduce
from typing import Dict, List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

BASIS_TOL = 1e-12


class OperatorBasis(BaseModel):
    """Traceless, pairwise trace-orthogonal Hermitian B_1 ... B_{d^2-1}."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    dim: int
    elements: Tuple[np.ndarray, ...]

    @model_validator(mode="after")
    def check_orthogonal(self):
        if len(self.elements) != self.dim ** 2 - 1:
            raise ValueError(f"expected {self.dim ** 2 - 1} elements, got {len(self.elements)}")
        for j, b in enumerate(self.elements):
            if abs(np.trace(b)) > BASIS_TOL:
                raise ValueError(f"element {j} is not traceless")
            for k in range(j + 1, len(self.elements)):
                if abs(np.trace(b @ self.elements[k])) > BASIS_TOL:
                    raise ValueError(f"elements {j} and {k} are not trace-orthogonal")
        return self


def gell_mann_basis(d: int) -> OperatorBasis:
    """Generalized Gell-Mann matrices, Tr[B_j B_k] = 2 delta_jk."""
    elements: List[np.ndarray] = []
    for j in range(d):
        for k in range(j + 1, d):
            sym = np.zeros((d, d), dtype=complex)
            sym[j, k] = sym[k, j] = 1.0
            elements.append(sym)
            anti = np.zeros((d, d), dtype=complex)
            anti[j, k] = -1j
            anti[k, j] = 1j
            elements.append(anti)
    for l in range(1, d):
        diag = np.zeros((d, d), dtype=complex)
        for j in range(l):
            diag[j, j] = 1.0
        diag[l, l] = -l
        elements.append(np.sqrt(2.0 / (l * (l + 1))) * diag)
    return OperatorBasis(dim=d, elements=tuple(elements))


@lru_cache(maxsize=16)
def monomial_pairings(d: int, n: int) -> Tuple[Tuple[Tuple[int, ...], np.ndarray], ...]:
    """One pairing matrix per monomial in the Bloch coefficients of rho^{(x)n}.

    Slots carry the identity (index 0) or a basis element (1..d^2-1); every
    slot assignment realizing the same multiset of basis indices is summed.
    Keys are the sorted tuples of nonzero indices, degree 0 first.
    """
    basis = gell_mann_basis(d)
    operators = (np.eye(d, dtype=complex),) + basis.elements
    groups: Dict[Tuple[int, ...], np.ndarray] = {}
    for slots in itertools.product(range(len(operators)), repeat=n):
        key = tuple(sorted(s for s in slots if s != 0))
        placed = reduce(np.kron, (operators[s] for s in slots))
        groups[key] = groups[key] + placed if key in groups else placed
    ordered = sorted(groups.items(), key=lambda item: (len(item[0]), item[0]))
    for _, pairing in ordered:
        pairing.setflags(write=False)
    return tuple(ordered)
