"""Exact canonicalization of finite metric spectra.

A spectrum is a strictly increasing vector of positive rationals. Two spectra
of the same length are equivalent when they agree on every triangle
inequality ``x_i + x_j >= x_k``. This package computes bounded integral
representatives of equivalence classes through vertices of a polyhedron,
and enumerates classes exhaustively for small lengths.
"""

__version__ = "0.1.0"

from .errors import SpectraError, InvariantViolation
from .spectrum import (
    Spectrum,
    IntegralSpectrum,
    TriangleProfile,
    parse_spectrum,
    format_spectrum,
    is_metric_triple,
    profile,
    equivalent,
    four_value_check,
    scale,
    monotone_consistent,
)
from .polytope import (
    ConstraintSystem,
    VertexCertificate,
    build_system,
    contains,
    feasible_point,
    purify_to_vertex,
    det_exact,
    cramer_solve,
)
from .canon import (
    CanonReport,
    rational_representative,
    integral_representative,
    conant_band,
    canonicalize,
)

__all__ = [
    "__version__",
    "SpectraError",
    "InvariantViolation",
    "Spectrum",
    "IntegralSpectrum",
    "TriangleProfile",
    "parse_spectrum",
    "format_spectrum",
    "is_metric_triple",
    "profile",
    "equivalent",
    "four_value_check",
    "scale",
    "monotone_consistent",
    "ConstraintSystem",
    "VertexCertificate",
    "build_system",
    "contains",
    "feasible_point",
    "purify_to_vertex",
    "det_exact",
    "cramer_solve",
    "CanonReport",
    "rational_representative",
    "integral_representative",
    "conant_band",
    "canonicalize",
]
