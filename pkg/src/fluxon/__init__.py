"""Aharonov-Bohm type forces between magnetic fluxons in a charged medium.

Submodules
----------
units         constants, parameters, flux folding, least squares
analytic      closed-form energies, forces and ratios
partial_wave  exact single-fluxon disk spectrum and filled-sea energies
screening     radial screening profile and screening lengths
lattice       tight-binding simulator with flux strings
cli           ``fluxon`` command line
"""

from .errors import (AccuracyError, CutoffError, DegeneracyError, DomainError, FitError,
                     FluxonError, NumericError, PreconditionError)
from .units import CGS, FitResult, PhysicalConstants, PhysicalParams, fold_alpha, linear_fit

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "CutoffError", "DegeneracyError", "DomainError", "FitError",
    "FluxonError", "NumericError", "PreconditionError",
    "CGS", "FitResult", "PhysicalConstants", "PhysicalParams", "fold_alpha", "linear_fit",
]
