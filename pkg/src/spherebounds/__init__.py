"""Periodic self-maps of spheres: constructions, orbit metrics and bound checks."""

from spherebounds.constants import ExtremalLengths, extremal_lengths, regular_configuration
from spherebounds.errors import (
    BalancedOrbit,
    ConvergenceError,
    DegenerateOrbit,
    InvalidMapError,
    ResolutionError,
    SolverFailure,
)

__all__ = [
    "ExtremalLengths",
    "extremal_lengths",
    "regular_configuration",
    "BalancedOrbit",
    "ConvergenceError",
    "DegenerateOrbit",
    "InvalidMapError",
    "ResolutionError",
    "SolverFailure",
]

__version__ = "0.1.0"
