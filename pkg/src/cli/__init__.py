"""Scenario runner and reference-threshold reproduction."""

from .reproduce import ReproRow, Reproducer, all_passed, print_summary, reproduce_all
from .runner import EXIT_INCONCLUSIVE, EXIT_INVALID, EXIT_OK, ScenarioRunner, run
from .scenario import Scenario, load_scenario

__all__ = [
    "Scenario",
    "load_scenario",
    "ScenarioRunner",
    "run",
    "EXIT_OK",
    "EXIT_INVALID",
    "EXIT_INCONCLUSIVE",
    "ReproRow",
    "Reproducer",
    "reproduce_all",
    "all_passed",
    "print_summary",
]
