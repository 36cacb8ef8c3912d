"""Shared fixtures."""

import math
from pathlib import Path

import pytest

from config import reset_settings
from src.measurements import builtin_assemblage

SQRT2 = math.sqrt(2.0)
NWISE_PAULI = (SQRT2 + 1.0) / 3.0
NCOPY_PAULI = math.sqrt(3.0) / 2.0
REPO_ROOT = Path(__file__).parent.parent


@pytest.fixture(autouse=True)
def fresh_settings(tmp_path, monkeypatch):
    """Run every test from defaults, away from any local .env."""
    monkeypatch.chdir(tmp_path)
    for name in ("INCOMPAT_SOLVER_TOL", "INCOMPAT_GRID_JOBS", "INCOMPAT_MULTICOPY_MAX_DIM"):
        monkeypatch.delenv(name, raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def pauli_xz():
    return builtin_assemblage("pauli-xz")


@pytest.fixture
def pauli_xyz():
    return builtin_assemblage("pauli-xyz")


@pytest.fixture
def xzh():
    return builtin_assemblage("xzh")
