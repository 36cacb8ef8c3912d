"""Certified lower bound on the distance to n-simulable assemblages.

Every grid pre-processing is scored with sim_fixed_pre_distance. Because the
distance moves by at most epsilon between any pre-processing and its grid
point, min_grid(nu) - epsilon bounds the true distance from below, and a
positive bound certifies non-membership.
"""

import itertools
from functools import partial
from multiprocessing import Pool
from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict
from tqdm import tqdm

from config import get_settings
from src.measurements import Assemblage
from src.simgrid.distance import sim_fixed_pre_distance
from src.simgrid.preprocessing import GridSpec, PreProcessing, grid_epsilon, rows_as_list
from src.utils.errors import IncompatibilityError, InvalidInputError
from src.utils.logging import get_logger, init_worker

logger = get_logger(__name__)


class GridFailure(BaseModel):
    """A grid point the solver could not certify."""

    model_config = ConfigDict(frozen=True)

    index: int
    pre: List[List[float]]
    status: str
    message: str


class GridCertificate(BaseModel):
    """Outcome of one grid scan."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    ell: float
    points_per_coordinate: int
    settings: int
    simulators: int
    outcome_total: int
    nu_g_star: float
    epsilon: float
    lower_bound: float
    argmin_pre: Optional[PreProcessing]
    argmin_index: int
    grid_points_evaluated: int
    failures: Tuple[GridFailure, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.failures and self.argmin_pre is not None

    @property
    def certifies_non_membership(self) -> bool:
        return self.valid and self.lower_bound > 0.0

    def to_json(self) -> Dict[str, Any]:
        return {
            "ell": self.ell,
            "points_per_coordinate": self.points_per_coordinate,
            "settings": self.settings,
            "simulators": self.simulators,
            "outcome_total": self.outcome_total,
            "nu_g_star": self.nu_g_star,
            "epsilon": self.epsilon,
            "lower_bound": self.lower_bound,
            "argmin_pre": rows_as_list(self.argmin_pre) if self.argmin_pre is not None else None,
            "argmin_index": self.argmin_index,
            "grid_points_evaluated": self.grid_points_evaluated,
            "valid": self.valid,
            "certifies_non_membership": self.certifies_non_membership,
            "failures": [f.model_dump() for f in self.failures],
        }


def _evaluate_point(
    item: Tuple[int, PreProcessing], assemblage: Assemblage, n: int, tol: Optional[float]
) -> Tuple[int, Optional[float], Optional[GridFailure]]:
    index, pre = item
    try:
        nu, _ = sim_fixed_pre_distance(assemblage, n, pre, tol=tol)
        return index, nu, None
    except IncompatibilityError as e:
        status = getattr(e, "status", None) or type(e).__name__
        return index, None, GridFailure(index=index, pre=rows_as_list(pre), status=str(status), message=str(e))


class GridCertifier:
    """Scan a pre-processing grid, serially or over a process pool."""

    def __init__(
        self,
        jobs: Optional[int] = None,
        tol: Optional[float] = None,
        chunksize: Optional[int] = None,
        progress: bool = False,
    ):
        settings = get_settings().grid
        self.jobs = jobs if jobs is not None else settings.jobs
        self.chunksize = chunksize if chunksize is not None else settings.chunksize
        self.tol = tol
        self.progress = progress
        self.logger = get_logger(self.__class__.__name__)

    def certify(self, assemblage: Assemblage, n: int, grid: GridSpec) -> GridCertificate:
        m = assemblage.settings
        if n < 1:
            raise InvalidInputError(f"n must be at least 1, got {n}")
        total = grid.count(m, n)
        self.logger.info("Scanning pre-processing grid", m=m, n=n, ell=grid.ell, points=total, jobs=self.jobs)

        worker = partial(_evaluate_point, assemblage=assemblage, n=n, tol=self.tol)
        items = enumerate(grid.pre_processings(m, n))

        best_index, best_nu = -1, float("inf")
        failures: List[GridFailure] = []
        evaluated = 0

        def consume(results):
            nonlocal best_index, best_nu, evaluated
            for index, nu, failure in tqdm(results, total=total, disable=not self.progress, desc="grid"):
                evaluated += 1
                if failure is not None:
                    failures.append(failure)
                # strict comparison keeps the first-seen index on ties
                elif nu < best_nu:
                    best_index, best_nu = index, nu

        if self.jobs > 1:
            with Pool(self.jobs, initializer=init_worker) as pool:
                consume(pool.imap(worker, items, chunksize=self.chunksize))
        else:
            consume(map(worker, items))

        failures.sort(key=lambda f: f.index)
        if failures:
            self.logger.warning("Grid points failed; certificate is invalid", failures=len(failures))

        epsilon = grid_epsilon(grid.ell, assemblage.outcome_counts, n)
        argmin = next(itertools.islice(grid.pre_processings(m, n), best_index, None)) if best_index >= 0 else None
        nu_star = best_nu if argmin is not None else float("nan")
        certificate = GridCertificate(
            ell=grid.ell,
            points_per_coordinate=grid.points,
            settings=m,
            simulators=n,
            outcome_total=sum(assemblage.outcome_counts),
            nu_g_star=nu_star,
            epsilon=epsilon,
            lower_bound=nu_star - epsilon,
            argmin_pre=argmin,
            argmin_index=best_index,
            grid_points_evaluated=evaluated,
            failures=tuple(failures),
        )
        self.logger.info(
            "Grid certificate",
            nu_g_star=certificate.nu_g_star,
            epsilon=epsilon,
            lower_bound=certificate.lower_bound,
            certified=certificate.certifies_non_membership,
        )
        return certificate


def sim_grid_certificate(
    assemblage: Assemblage,
    n: int,
    grid: GridSpec,
    jobs: Optional[int] = None,
    tol: Optional[float] = None,
    progress: bool = False,
) -> GridCertificate:
    """Certified lower bound nu*_g - epsilon on the distance of A to SIM_n."""
    return GridCertifier(jobs=jobs, tol=tol, progress=progress).certify(assemblage, n, grid)

