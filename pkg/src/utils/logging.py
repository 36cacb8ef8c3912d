"""Logging configuration: structlog over a rich stderr handler."""

import logging
import os
from pathlib import Path
from typing import Optional

import structlog
from rich.console import Console
from rich.logging import RichHandler

from config import get_settings

# loggers of the conic front-end and its backends
SOLVER_LOGGERS = ("cvxpy", "__cvxpy__", "clarabel", "scs")


def _renderer(log_format: str):
    if log_format == "json":
        return structlog.processors.JSONRenderer(sort_keys=True)
    return structlog.dev.ConsoleRenderer(colors=True)


def setup_logging(
    log_level: str = "INFO",
    log_format: str = "text",
    log_file: Optional[Path] = None,
    solver_verbose: bool = False,
) -> None:
    """Configure structlog and the root handler.

    Solver loggers stay at WARNING unless solver_verbose is set, so a grid
    scan of thousands of SDPs does not flood the console.
    """
    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            _renderer(log_format),
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )

    level = getattr(logging, log_level.upper())
    formatter = logging.Formatter("%(message)s")

    console_handler = RichHandler(
        console=Console(stderr=True),
        show_time=log_format != "json",
        show_path=False,
        markup=False,
    )
    console_handler.setLevel(level)
    console_handler.setFormatter(formatter)

    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    root_logger.handlers.clear()
    root_logger.addHandler(console_handler)

    if log_file:
        log_file = Path(log_file)
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setLevel(level)
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)

    solver_level = logging.DEBUG if solver_verbose else logging.WARNING
    for name in SOLVER_LOGGERS:
        logging.getLogger(name).setLevel(solver_level)


def get_logger(name: str) -> structlog.BoundLogger:
    """Get a logger instance."""
    return structlog.get_logger(name)


def init_worker() -> None:
    """Pool initializer: tag every record from this process with its pid."""
    structlog.contextvars.clear_contextvars()
    structlog.contextvars.bind_contextvars(worker=os.getpid())


def _init_logging():
    settings = get_settings()
    setup_logging(
        log_level=settings.logging.level,
        log_format=settings.logging.format,
        log_file=settings.logging.file,
        solver_verbose=settings.solver.verbose,
    )


_init_logging()
