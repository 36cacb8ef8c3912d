"""Threshold profiles across the incompatibility hierarchy and their consistency checks."""

import time
from typing import Any, Callable, Dict, List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field

from config import get_settings
from src.measurements import Assemblage
from src.multicopy import clone_bound, jm_clone_bound, ncopy_visibility
from src.simgrid import PreProcessing, sim_fixed_pre_visibility
from src.structures import BlockOracle, best_sim_det_partition, nwise_visibility
from src.utils.errors import DimensionGuardError, HierarchyViolationError, InconclusiveError, InvalidInputError
from src.utils.logging import get_logger

logger = get_logger(__name__)

ENTRY_ORDER = (
    "jm_clone_bound",
    "eta_JM",
    "eta_pair",
    "eta_SIMdet",
    "eta_SIMfixed",
    "eta_JMconv",
    "eta_Copy",
    "clone_bound",
)

ENTRY_LABELS = {
    "jm_clone_bound": "JM cloning bound (m+d)/(m(1+d))",
    "eta_JM": "JM",
    "eta_pair": "pairwise JM",
    "eta_SIMdet": "SIM^Det_n",
    "eta_SIMfixed": "SIM_n, fixed pre-processing (lower bound)",
    "eta_JMconv": "JM^conv_n",
    "eta_Copy": "Copy_n",
    "clone_bound": "cloning bound n(d+m)/(m(d+n))",
}

# (smaller, larger) pairs that hold for every assemblage
CHAIN: Tuple[Tuple[str, str], ...] = (
    ("jm_clone_bound", "eta_JM"),
    ("eta_JM", "eta_pair"),
    ("eta_JM", "eta_SIMdet"),
    ("eta_SIMdet", "eta_JMconv"),
    ("eta_SIMfixed", "eta_JMconv"),
    ("eta_JMconv", "eta_Copy"),
    ("clone_bound", "eta_Copy"),
)

# pairs whose gap is reported as the strictness of an inclusion
STRICT_STEPS: Tuple[Tuple[str, str], ...] = (
    ("eta_JM", "eta_SIMdet"),
    ("eta_SIMdet", "eta_JMconv"),
    ("eta_JMconv", "eta_Copy"),
)


class ThresholdEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    value: Optional[float] = None
    status: Literal["ok", "inconclusive", "skipped"] = "ok"
    message: str = ""
    runtime: float = Field(default=0.0, ge=0.0)


class ThresholdProfile(BaseModel):
    """Critical visibilities of one assemblage for every set in the hierarchy."""

    model_config = ConfigDict(frozen=True)

    descriptor: str
    d: int
    m: int
    n: int
    chain_tol: float
    solver_tol: float
    entries: Dict[str, ThresholdEntry]

    def value(self, name: str) -> Optional[float]:
        entry = self.entries.get(name)
        return entry.value if entry is not None and entry.status == "ok" else None

    def gaps(self) -> Dict[str, Optional[float]]:
        out = {}
        for lower, upper in STRICT_STEPS:
            a, b = self.value(lower), self.value(upper)
            out[f"{lower}<{upper}"] = None if a is None or b is None else b - a
        return out

    @property
    def complete(self) -> bool:
        return all(entry.status != "inconclusive" for entry in self.entries.values())

    def to_json(self, include_runtimes: bool = False) -> Dict[str, Any]:
        entries = {}
        for name in ENTRY_ORDER:
            entry = self.entries[name]
            data = {"value": entry.value, "status": entry.status, "message": entry.message}
            if include_runtimes:
                data["runtime"] = entry.runtime
            entries[name] = data
        return {
            "descriptor": self.descriptor,
            "d": self.d,
            "m": self.m,
            "n": self.n,
            "chain_tol": self.chain_tol,
            "solver_tol": self.solver_tol,
            "entries": entries,
            "gaps": self.gaps(),
        }


def _timed(name: str, compute: Callable[[], Optional[float]]) -> ThresholdEntry:
    start = time.perf_counter()
    try:
        value = compute()
    except InconclusiveError as e:
        logger.warning("Threshold inconclusive", entry=name, error=str(e))
        return ThresholdEntry(name=name, status="inconclusive", message=str(e), runtime=time.perf_counter() - start)
    except DimensionGuardError as e:
        return ThresholdEntry(name=name, status="skipped", message=str(e), runtime=time.perf_counter() - start)
    runtime = time.perf_counter() - start
    if value is None:
        message = "no pre-processing strategies given"
        return ThresholdEntry(name=name, status="skipped", message=message, runtime=runtime)
    return ThresholdEntry(name=name, value=float(value), runtime=runtime)


def check_chain(profile: ThresholdProfile) -> None:
    """Raise HierarchyViolationError on the first inclusion that fails beyond chain_tol."""
    for lower, upper in CHAIN:
        a, b = profile.value(lower), profile.value(upper)
        if a is None or b is None:
            continue
        if a > b + profile.chain_tol:
            raise HierarchyViolationError(
                f"{lower} = {a:.6f} exceeds {upper} = {b:.6f} for {profile.descriptor}",
                lower=lower,
                upper=upper,
                values={lower: a, upper: b},
            )


def threshold_profile(
    assemblage: Assemblage,
    n: int,
    pre_strategies: Optional[Sequence[PreProcessing]] = None,
    descriptor: str = "",
    tol: Optional[float] = None,
    check: bool = True,
    max_dim: Optional[int] = None,
) -> ThresholdProfile:
    """Every hierarchy threshold of assemblage at n, checked against the inclusion chain.

    max_dim replaces the configured multi-copy guard; eta_Copy is skipped when d**n exceeds it.
    """
    d, m = assemblage.dim, assemblage.settings
    if not 1 <= n <= m:
        raise InvalidInputError(f"need 1 <= n <= m, got m={m}, n={n}")
    settings = get_settings()
    pre_strategies = list(pre_strategies or [])
    for pre in pre_strategies:
        if pre.probs.shape != (m, n):
            raise InvalidInputError(f"pre-processing of shape {pre.probs.shape} does not fit m={m}, n={n}")

    oracle = BlockOracle(assemblage, tol)
    full = tuple(range(m))

    def pair_value() -> float:
        values = [oracle.visibility((s, t)) for s in range(m) for t in range(s + 1, m)]
        return min(values, default=1.0)

    def fixed_value() -> Optional[float]:
        if not pre_strategies:
            return None
        return max(sim_fixed_pre_visibility(assemblage, n, pre, tol=tol).eta for pre in pre_strategies)

    computations: List[Tuple[str, Callable[[], Optional[float]]]] = [
        ("jm_clone_bound", lambda: jm_clone_bound(d, m).eta),
        ("eta_JM", lambda: oracle.visibility(full)),
        ("eta_pair", pair_value),
        ("eta_SIMdet", lambda: best_sim_det_partition(assemblage, n, tol, oracle)[0].eta),
        ("eta_SIMfixed", fixed_value),
        ("eta_JMconv", lambda: nwise_visibility(assemblage, n, tol=tol).eta),
        ("eta_Copy", lambda: ncopy_visibility(assemblage, n, tol=tol, max_dim=max_dim).eta),
        ("clone_bound", lambda: clone_bound(d, m, n).eta),
    ]
    entries = {name: _timed(name, compute) for name, compute in computations}
    profile = ThresholdProfile(
        descriptor=descriptor,
        d=d,
        m=m,
        n=n,
        chain_tol=settings.hierarchy.chain_tol,
        solver_tol=tol if tol is not None else settings.solver.tol,
        entries=entries,
    )
    logger.info(
        "Threshold profile",
        descriptor=descriptor,
        n=n,
        **{name: entry.value for name, entry in entries.items()},
    )
    if check:
        check_chain(profile)
    return profile
