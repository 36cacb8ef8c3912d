"""Probabilistic n-simulability: fixed pre-processing SDPs and grid certificates."""

from .certificate import GridCertificate, GridCertifier, GridFailure, sim_grid_certificate
from .distance import SimulatorFamily, sim_fixed_pre_distance, sim_fixed_pre_visibility
from .preprocessing import GridSpec, PreProcessing, grid_epsilon

__all__ = [
    "PreProcessing",
    "GridSpec",
    "grid_epsilon",
    "SimulatorFamily",
    "sim_fixed_pre_distance",
    "sim_fixed_pre_visibility",
    "GridCertificate",
    "GridCertifier",
    "GridFailure",
    "sim_grid_certificate",
]
