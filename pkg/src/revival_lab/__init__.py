"""Free Schroedinger evolution on a bounded interval with linear boundary conditions."""

__version__ = "0.1.0"

from .diagnostics import ComparisonReport, RoughnessReport, box_dimension, compare, energy, linearity_breakpoints
from .eigenbasis import biorthogonality_constant, dual_eigenfunction, eigenfunction, pairing, pp_constants
from .errors import RevivalLabError
from .piecewise import BoxSpec, PiecewisePoly, PolyBumpSpec, RampSpec, RawSegments, bounded_ft, make_datum
from .revival import RationalTime, copy_supports, evaluate_revival
from .solver import FieldSample, TruncationPlan, evaluate_residue, evaluate_series
from .spectrum import BoundaryConditions, Spectrum, classify_modes, compute_spectrum, count_zeros

__all__ = [
    "BoundaryConditions",
    "BoxSpec",
    "ComparisonReport",
    "FieldSample",
    "PiecewisePoly",
    "PolyBumpSpec",
    "RampSpec",
    "RationalTime",
    "RawSegments",
    "RevivalLabError",
    "RoughnessReport",
    "Spectrum",
    "TruncationPlan",
    "biorthogonality_constant",
    "bounded_ft",
    "box_dimension",
    "classify_modes",
    "compare",
    "compute_spectrum",
    "copy_supports",
    "count_zeros",
    "dual_eigenfunction",
    "eigenfunction",
    "energy",
    "evaluate_residue",
    "evaluate_revival",
    "evaluate_series",
    "linearity_breakpoints",
    "make_datum",
    "pairing",
    "pp_constants",
]
