"""Property harness: threshold profiles over seeded random assemblages."""

from functools import partial
from multiprocessing import Pool
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import jsonlines
from pydantic import BaseModel, ConfigDict
from tqdm import tqdm

from config import get_settings
from src.hierarchy.profile import check_chain, threshold_profile
from src.measurements import random_assemblage
from src.simgrid import PreProcessing
from src.utils.errors import HierarchyViolationError, InvalidInputError
from src.utils.logging import get_logger, init_worker

logger = get_logger(__name__)


class FuzzRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    index: int
    seed: int
    values: Dict[str, Optional[float]]
    statuses: Dict[str, str]
    violation: Optional[str] = None


class FuzzReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    d: int
    m: int
    k: int
    n: int
    count: int
    seed: int
    records: Tuple[FuzzRecord, ...] = ()

    @property
    def violations(self) -> List[FuzzRecord]:
        return [r for r in self.records if r.violation is not None]

    @property
    def inconclusive(self) -> int:
        return sum(1 for r in self.records if "inconclusive" in r.statuses.values())

    def to_json(self) -> Dict[str, Any]:
        return {
            "d": self.d,
            "m": self.m,
            "k": self.k,
            "n": self.n,
            "count": self.count,
            "seed": self.seed,
            "violations": len(self.violations),
            "inconclusive": self.inconclusive,
            "records": [r.model_dump() for r in self.records],
        }


def _profile_one(index: int, d: int, m: int, k: int, n: int, seed: int, tol: Optional[float]) -> FuzzRecord:
    sample_seed = seed + index
    assemblage = random_assemblage(d, m, k, sample_seed)
    profile = threshold_profile(
        assemblage,
        n,
        pre_strategies=[PreProcessing.uniform(m, n)],
        descriptor=f"random(d={d}, m={m}, k={k}, seed={sample_seed})",
        tol=tol,
        check=False,
    )
    violation = None
    try:
        check_chain(profile)
    except HierarchyViolationError as e:
        violation = str(e)
    return FuzzRecord(
        index=index,
        seed=sample_seed,
        values={name: entry.value for name, entry in profile.entries.items()},
        statuses={name: entry.status for name, entry in profile.entries.items()},
        violation=violation,
    )


def hierarchy_fuzz(
    d: int,
    m: int,
    k: int,
    n: int,
    count: int,
    seed: int,
    jobs: Optional[int] = None,
    tol: Optional[float] = None,
    records_path: Optional[Path] = None,
    progress: bool = False,
) -> FuzzReport:
    """Profile count random assemblages (seeds seed, seed+1, ...) and collect chain violations."""
    if count < 0:
        raise InvalidInputError(f"count must be nonnegative, got {count}")
    if not 1 <= n <= m:
        raise InvalidInputError(f"need 1 <= n <= m, got m={m}, n={n}")
    jobs = jobs if jobs is not None else get_settings().grid.jobs
    worker = partial(_profile_one, d=d, m=m, k=k, n=n, seed=seed, tol=tol)

    records: List[FuzzRecord] = []
    writer = jsonlines.open(records_path, mode="w") if records_path else None
    try:
        if jobs > 1 and count > 1:
            with Pool(jobs, initializer=init_worker) as pool:
                results = pool.imap(worker, range(count))
                for record in tqdm(results, total=count, disable=not progress, desc="fuzz"):
                    records.append(record)
                    if writer:
                        writer.write(record.model_dump())
        else:
            for index in tqdm(range(count), disable=not progress, desc="fuzz"):
                record = worker(index)
                records.append(record)
                if writer:
                    writer.write(record.model_dump())
    finally:
        if writer:
            writer.close()

    report = FuzzReport(d=d, m=m, k=k, n=n, count=count, seed=seed, records=tuple(records))
    if report.violations:
        logger.warning("Hierarchy violations found", violations=len(report.violations))
    logger.info("Fuzz finished", count=count, violations=len(report.violations), inconclusive=report.inconclusive)
    return report
