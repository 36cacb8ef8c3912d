"""Scenario execution and the exit-code contract."""

from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple

from pydantic import ValidationError

from config import get_settings
from src.cli.scenario import Scenario, load_scenario
from src.hierarchy import hierarchy_fuzz, print_profile, threshold_profile, write_csv, write_json
from src.jm import jm_feasible, jm_visibility, verify_parent
from src.measurements import Assemblage, depolarize
from src.multicopy import (
    clone_bound_fraction,
    ncopy_feasible,
    ncopy_visibility,
    parent_to_json,
    verify_multicopy_statistics,
)
from src.simgrid import GridSpec, sim_grid_certificate
from src.structures import (
    decomposition_to_json,
    nwise_feasible,
    nwise_visibility,
    sim_det_feasible,
    sim_det_visibility,
    verify_decomposition,
)
from src.utils.errors import HierarchyViolationError, InconclusiveError, InvalidInputError
from src.utils.logging import get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INCONCLUSIVE = 2


class ScenarioRunner:
    """Run one scenario with optional command-line overrides."""

    def __init__(
        self,
        tol: Optional[float] = None,
        ell: Optional[float] = None,
        jobs: Optional[int] = None,
        fast: bool = False,
        progress: bool = False,
        max_dim: Optional[int] = None,
        force_dim: bool = False,
    ):
        settings = get_settings()
        self.tol = tol
        self.max_dim = max_dim
        self.force_dim = force_dim
        self.ell_override = ell
        self.fast_ell = settings.grid.fast_ell if fast else None
        self.jobs = jobs if jobs is not None else settings.grid.jobs
        self.progress = progress
        self.logger = get_logger(self.__class__.__name__)

    def grid_ell(self, scenario: Scenario) -> float:
        if self.ell_override is not None:
            return self.ell_override
        if self.fast_ell is not None:
            return self.fast_ell
        return scenario.ell if scenario.ell is not None else get_settings().grid.ell

    def dimension_limit(self, assemblage: Assemblage, n: int) -> Optional[int]:
        """Multi-copy guard for this run; forcing lifts it to exactly d**n."""
        if self.force_dim:
            self.logger.warning("Multi-copy dimension guard overridden", d=assemblage.dim, n=n, size=assemblage.dim**n)
            return assemblage.dim**n
        return self.max_dim

    def execute(self, scenario: Scenario) -> Tuple[Dict[str, Any], bool]:
        """Result payload and whether every certificate in it is conclusive."""
        handlers: Dict[str, Callable[[Scenario], Tuple[Dict[str, Any], bool]]] = {
            "jm": self._jm,
            "sim-det": self._sim_det,
            "nwise": self._nwise,
            "ncopy": self._ncopy,
            "sim-grid": self._sim_grid,
            "clone-bound": self._clone_bound,
            "profile": self._profile,
            "fuzz": self._fuzz,
        }
        self.logger.info("Running scenario", task=scenario.task, assemblage=scenario.descriptor())
        return handlers[scenario.task](scenario)

    def _noisy(self, scenario: Scenario, eta: Optional[float] = None) -> Assemblage:
        assemblage = scenario.load_assemblage()
        eta = scenario.eta if eta is None else eta
        return assemblage if eta is None else depolarize(assemblage, eta)

    def _membership(
        self,
        scenario: Scenario,
        visibility: Callable[[Assemblage], float],
        decide: Callable[[Assemblage], Dict[str, Any]],
    ) -> Tuple[Dict[str, Any], bool]:
        if scenario.sweep is not None:
            points = []
            for eta in scenario.sweep:
                outcome = decide(self._noisy(scenario, eta))
                points.append({"eta": eta, "member": outcome["member"]})
            return {"sweep": points}, True
        if scenario.eta is not None:
            return {"eta": scenario.eta, **decide(self._noisy(scenario))}, True
        return {"visibility": visibility(scenario.load_assemblage())}, True

    def _jm(self, scenario: Scenario) -> Tuple[Dict[str, Any], bool]:
        def decide(assemblage: Assemblage) -> Dict[str, Any]:
            subset = scenario.zero_based_subset(assemblage.settings)
            member, parent = jm_feasible(assemblage, subset, tol=self.tol)
            if not member:
                return {"member": False}
            return {
                "member": True,
                "parent": parent.to_json(),
                "residual": verify_parent(assemblage, subset, parent),
            }

        def visibility(assemblage: Assemblage) -> float:
            return jm_visibility(assemblage, scenario.zero_based_subset(assemblage.settings), tol=self.tol).eta

        return self._membership(scenario, visibility, decide)

    def _sim_det(self, scenario: Scenario) -> Tuple[Dict[str, Any], bool]:
        def decide(assemblage: Assemblage) -> Dict[str, Any]:
            member, partition = sim_det_feasible(assemblage, scenario.n, tol=self.tol)
            if not member:
                return {"member": False}
            return {"member": True, "partition": partition.one_based()}

        return self._membership(
            scenario, lambda a: sim_det_visibility(a, scenario.n, tol=self.tol).eta, decide
        )

    def _nwise(self, scenario: Scenario) -> Tuple[Dict[str, Any], bool]:
        def decide(assemblage: Assemblage) -> Dict[str, Any]:
            member, decomposition = nwise_feasible(assemblage, scenario.n, tol=self.tol)
            if not member:
                return {"member": False}
            return {
                "member": True,
                "decomposition": decomposition_to_json(decomposition),
                "residual": verify_decomposition(assemblage, decomposition),
            }

        return self._membership(
            scenario, lambda a: nwise_visibility(a, scenario.n, tol=self.tol).eta, decide
        )

    def _ncopy(self, scenario: Scenario) -> Tuple[Dict[str, Any], bool]:
        def decide(assemblage: Assemblage) -> Dict[str, Any]:
            limit = self.dimension_limit(assemblage, scenario.n)
            member, parent = ncopy_feasible(assemblage, scenario.n, tol=self.tol, max_dim=limit)
            if not member:
                return {"member": False}
            residual = verify_multicopy_statistics(assemblage, parent, trials=scenario.trials, seed=scenario.seed)
            return {"member": True, "parent": parent_to_json(parent), "residual": residual}

        def visibility(assemblage: Assemblage) -> float:
            limit = self.dimension_limit(assemblage, scenario.n)
            return ncopy_visibility(assemblage, scenario.n, tol=self.tol, max_dim=limit).eta

        return self._membership(scenario, visibility, decide)

    def _sim_grid(self, scenario: Scenario) -> Tuple[Dict[str, Any], bool]:
        assemblage = self._noisy(scenario)
        grid = GridSpec(ell=self.grid_ell(scenario))
        certificate = sim_grid_certificate(
            assemblage, scenario.n, grid, jobs=self.jobs, tol=self.tol, progress=self.progress
        )
        if not certificate.valid:
            self.logger.warning("Grid certificate invalid", failures=len(certificate.failures))
        return {"eta": scenario.eta, "certificate": certificate.to_json()}, certificate.valid

    def _clone_bound(self, scenario: Scenario) -> Tuple[Dict[str, Any], bool]:
        if scenario.assemblage is not None:
            assemblage = scenario.load_assemblage()
            d, m = assemblage.dim, assemblage.settings
        else:
            d, m = scenario.d, scenario.m
        value: Fraction = clone_bound_fraction(d, m, scenario.n)
        return {"d": d, "m": m, "n": scenario.n, "exact": str(value), "value": float(value)}, True

    def _profile(self, scenario: Scenario) -> Tuple[Dict[str, Any], bool]:
        assemblage = self._noisy(scenario)
        profile = threshold_profile(
            assemblage,
            scenario.n,
            pre_strategies=scenario.pre_processings(),
            descriptor=scenario.descriptor(),
            tol=self.tol,
            max_dim=self.dimension_limit(assemblage, scenario.n),
        )
        if scenario.csv is not None:
            write_csv([profile], scenario.csv)
        if self.progress:
            print_profile(profile)
        return {"profile": profile.to_json()}, profile.complete

    def _fuzz(self, scenario: Scenario) -> Tuple[Dict[str, Any], bool]:
        report = hierarchy_fuzz(
            scenario.d,
            scenario.m,
            scenario.k,
            scenario.n,
            scenario.count,
            scenario.seed,
            jobs=self.jobs,
            tol=self.tol,
            records_path=scenario.records,
            progress=self.progress,
        )
        return {"fuzz": report.to_json()}, report.inconclusive == 0


def default_output(scenario_file: Path) -> Path:
    return Path("results") / f"{Path(scenario_file).stem}.json"


def run(
    scenario_file: Path,
    out: Optional[Path] = None,
    ell: Optional[float] = None,
    jobs: Optional[int] = None,
    tol: Optional[float] = None,
    fast: bool = False,
    progress: bool = False,
    max_dim: Optional[int] = None,
    force_dim: bool = False,
) -> int:
    """Run a scenario file and write its result; returns the process exit code.

    0 on success, 1 on invalid input, 2 when a solver result or grid
    certificate is inconclusive.
    """
    try:
        scenario = load_scenario(scenario_file)
        runner = ScenarioRunner(
            tol=tol, ell=ell, jobs=jobs, fast=fast, progress=progress, max_dim=max_dim, force_dim=force_dim
        )
        result, conclusive = runner.execute(scenario)
    except InconclusiveError as e:
        logger.error("Solver result inconclusive", error=str(e), status=e.status, residual=e.residual)
        return EXIT_INCONCLUSIVE
    except HierarchyViolationError as e:
        logger.error("Hierarchy chain violated", error=str(e), lower=e.lower, upper=e.upper, values=e.values)
        return EXIT_INVALID
    except (InvalidInputError, ValidationError, OSError) as e:
        logger.error("Invalid scenario", error=str(e))
        return EXIT_INVALID

    path = out or scenario.output or default_output(scenario_file)
    payload = {"scenario": scenario.model_dump(mode="json", exclude_none=True), "result": result}
    try:
        write_json(payload, path)
    except OSError as e:
        logger.error("Cannot write result", path=str(path), error=str(e))
        return EXIT_INVALID
    return EXIT_OK if conclusive else EXIT_INCONCLUSIVE
