#!/usr/bin/env python3
"""Run one scenario file and write its result JSON."""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from config import get_settings
from src.cli import run
from src.utils.logging import get_logger, setup_logging

logger = get_logger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Classify an assemblage within the incompatibility hierarchy"
    )
    parser.add_argument(
        "--scenario",
        type=Path,
        required=True,
        help="Scenario file (JSON or YAML)"
    )
    parser.add_argument(
        "--out",
        type=Path,
        help="Result file (default: scenario 'output' or results/<scenario>.json)"
    )
    parser.add_argument(
        "--ell",
        type=float,
        help="Grid step for sim-grid tasks"
    )
    parser.add_argument(
        "--jobs",
        type=int,
        help="Worker processes for sim-grid and fuzz tasks"
    )
    parser.add_argument(
        "--tol",
        type=float,
        help="Solver tolerance (overrides INCOMPAT_SOLVER_TOL)"
    )
    parser.add_argument(
        "--fast",
        action="store_true",
        help="Use the coarse grid step"
    )
    parser.add_argument(
        "--max-dim",
        type=int,
        help="Largest d**n for n-copy problems (overrides INCOMPAT_MULTICOPY_MAX_DIM)"
    )
    parser.add_argument(
        "--force-dim",
        action="store_true",
        help="Run n-copy problems whatever their size"
    )
    parser.add_argument(
        "--progress",
        action="store_true",
        help="Show progress bars and tables"
    )
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default="INFO",
        help="Logging level"
    )
    parser.add_argument(
        "--log-format",
        choices=["json", "text"],
        default="text",
        help="Log format"
    )
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for scenario runs."""
    args = build_parser().parse_args(argv)

    settings = get_settings()
    setup_logging(
        log_level=args.log_level,
        log_format=args.log_format,
        log_file=settings.logging.file,
        solver_verbose=settings.solver.verbose
    )

    if not args.scenario.exists():
        logger.error(f"Scenario file not found: {args.scenario}")
        return 1
    if args.jobs is not None and args.jobs < 1:
        logger.error("--jobs must be at least 1")
        return 1
    if args.ell is not None and not 0.0 < args.ell <= 1.0:
        logger.error("--ell must lie in (0, 1]")
        return 1
    if args.tol is not None and args.tol <= 0.0:
        logger.error("--tol must be positive")
        return 1
    if args.max_dim is not None and args.max_dim < 2:
        logger.error("--max-dim must be at least 2")
        return 1

    return run(
        args.scenario,
        out=args.out,
        ell=args.ell,
        jobs=args.jobs,
        tol=args.tol,
        fast=args.fast,
        progress=args.progress,
        max_dim=args.max_dim,
        force_dim=args.force_dim,
    )


if __name__ == "__main__":
    sys.exit(main())
