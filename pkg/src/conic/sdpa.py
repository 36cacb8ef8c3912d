"""Debug dump of a ConicProblem in SDPA sparse format.

The problem is written as an SDPA dual (max Tr[F0 Y] s.t. Tr[Fi Y] = ci):
F0 = -C, Fi = Ai, ci = bi. Each Hermitian variable is one block of size 2d
holding its real embedding, whose block-structure equalities are emitted as
extra constraints after the problem's own. Scalars share a final diagonal
block: a bounded scalar s >= L is stored as s - L, a free scalar as the
difference of two nonnegative entries.
"""

from pathlib import Path
from typing import Dict, List, Tuple

from src.conic.problem import ConicProblem, LinearFunctional
from src.conic.solver import embed
from src.utils.logging import get_logger

logger = get_logger(__name__)

# (block, row, col) -> value, 1-based, upper triangle
SparseMatrix = Dict[Tuple[int, int, int], float]


def _add(entries: SparseMatrix, block: int, i: int, j: int, value: float) -> None:
    if value == 0.0:
        return
    key = (block, min(i, j) + 1, max(i, j) + 1)
    entries[key] = entries.get(key, 0.0) + value


class _SdpaLayout:
    def __init__(self, problem: ConicProblem):
        self.problem = problem
        self.blocks: Dict[str, int] = {}
        for index, label in enumerate(problem.psd_vars, start=1):
            self.blocks[label] = index
        self.lp_block = len(self.blocks) + 1
        self.lp_columns: Dict[str, List[Tuple[int, float]]] = {}
        column = 0
        for label, var in problem.scalar_vars.items():
            if var.lower is None:
                self.lp_columns[label] = [(column, 1.0), (column + 1, -1.0)]
                column += 2
            else:
                self.lp_columns[label] = [(column, 1.0)]
                column += 1
        self.lp_size = column

    def block_struct(self) -> List[int]:
        sizes = [2 * var.dim for var in self.problem.psd_vars.values()]
        if self.lp_size:
            sizes.append(-self.lp_size)
        return sizes

    def functional(self, functional: LinearFunctional, factor: float = 1.0) -> Tuple[SparseMatrix, float]:
        """Entries of factor * functional and the constant moved by scalar shifts."""
        entries: SparseMatrix = {}
        shift = 0.0
        for label, pairing in functional.matrix_terms.items():
            block = self.blocks[label]
            matrix = 0.5 * factor * embed(pairing)
            size = matrix.shape[0]
            for i in range(size):
                for j in range(i, size):
                    _add(entries, block, i, j, float(matrix[i, j]))
        for label, coefficient in functional.scalar_terms.items():
            for column, sign in self.lp_columns[label]:
                _add(entries, self.lp_block, column, column, factor * coefficient * sign)
            lower = self.problem.scalar_vars[label].lower
            if lower is not None:
                shift += factor * coefficient * lower
        return entries, shift

    def structure_constraints(self) -> List[SparseMatrix]:
        """Y[:d,:d] == Y[d:,d:] and Y[:d,d:] + Y[d:,:d] == 0 for every block."""
        rows: List[SparseMatrix] = []
        for label, var in self.problem.psd_vars.items():
            block, d = self.blocks[label], var.dim
            for j in range(d):
                for k in range(j, d):
                    entries: SparseMatrix = {}
                    weight = 1.0 if j == k else 0.5
                    _add(entries, block, j, k, weight)
                    _add(entries, block, d + j, d + k, -weight)
                    rows.append(entries)
                    entries = {}
                    if j == k:
                        _add(entries, block, j, d + j, 1.0)
                    else:
                        _add(entries, block, j, d + k, 0.5)
                        _add(entries, block, k, d + j, 0.5)
                    rows.append(entries)
        return rows


def write_sdpa(problem: ConicProblem, path: Path) -> Path:
    """Write problem to path in SDPA sparse format and return the path."""
    path = Path(path)
    layout = _SdpaLayout(problem)

    constraints: List[Tuple[SparseMatrix, float]] = []
    for functional, rhs in problem.eq_constraints:
        entries, shift = layout.functional(functional)
        constraints.append((entries, rhs - shift))
    for entries in layout.structure_constraints():
        constraints.append((entries, 0.0))

    # SDPA maximizes Tr[F0 Y]; a minimization is written with F0 = -C
    factor = -1.0 if problem.sense == "min" else 1.0
    objective, objective_shift = layout.functional(problem.objective, factor)

    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        constant = problem.objective.constant + factor * objective_shift
        f.write(f"* {problem.name}: {problem.sense} objective, constant {constant!r}\n")
        f.write(f"{len(constraints)}\n")
        f.write(f"{len(layout.block_struct())}\n")
        f.write(" ".join(str(s) for s in layout.block_struct()) + "\n")
        f.write(" ".join(repr(float(rhs)) for _, rhs in constraints) + "\n")
        for (block, i, j), value in sorted(objective.items()):
            f.write(f"0 {block} {i} {j} {value!r}\n")
        for index, (entries, _) in enumerate(constraints, start=1):
            for (block, i, j), value in sorted(entries.items()):
                if abs(value) > 0.0:
                    f.write(f"{index} {block} {i} {j} {value!r}\n")

    logger.debug("Wrote SDPA dump", problem=problem.name, path=str(path), constraints=len(constraints))
    return path
