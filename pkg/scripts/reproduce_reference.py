#!/usr/bin/env python3
"""Recompute every reference threshold and print expected against computed."""

import argparse
import sys
from pathlib import Path
from typing import List, Optional

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from config import get_settings
from src.cli import all_passed, print_summary, reproduce_all
from src.hierarchy import write_json
from src.utils.logging import get_logger, setup_logging

logger = get_logger(__name__)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the reproduction run."""
    parser = argparse.ArgumentParser(
        description="Reproduce the reference incompatibility thresholds"
    )
    parser.add_argument(
        "--fast",
        action="store_true",
        help="Skip the full 1/50 grid and check the coarse grid only"
    )
    parser.add_argument(
        "--jobs",
        type=int,
        default=None,
        help="Worker processes for the grid certificate"
    )
    parser.add_argument(
        "--tol",
        type=float,
        default=None,
        help="Solver tolerance"
    )
    parser.add_argument(
        "--out",
        type=Path,
        help="Optional JSON summary file"
    )
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
        default="WARNING",
        help="Logging level"
    )

    args = parser.parse_args(argv)
    setup_logging(log_level=args.log_level, log_file=get_settings().logging.file)

    rows = reproduce_all(fast=args.fast, jobs=args.jobs, tol=args.tol)
    print_summary(rows)
    if args.out:
        write_json({"rows": [row.model_dump() for row in rows]}, args.out)

    if not all_passed(rows):
        logger.error("Some reference thresholds were not reproduced")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
