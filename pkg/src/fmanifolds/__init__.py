"""Construction and verification of F-manifolds with polynomial structure constants."""

__version__ = "0.1.0"

from .poly import ExactPoly, PolyParseError, parse_poly, format_poly  # noqa: E402
from .algebra import FiniteAlgebra, decompose, is_frobenius, partition  # noqa: E402
from .chart import (  # noqa: E402
    Chart,
    EulerCandidate,
    PolyVectorField,
    euler_check,
    fiber_algebra,
    integrability_check,
    solve_euler_weights,
    validate,
)
from .construct import catalog, catalog_list  # noqa: E402
from .spectrum import caustic_poly, ll_map, reconstruct_multiplication  # noqa: E402
from .metrics import MetricField, frobenius_report  # noqa: E402
from .document import ChartDocument, load_chart, parse_chart  # noqa: E402

__all__ = [
    "ExactPoly", "PolyParseError", "parse_poly", "format_poly",
    "FiniteAlgebra", "decompose", "is_frobenius", "partition",
    "Chart", "EulerCandidate", "PolyVectorField", "euler_check", "fiber_algebra",
    "integrability_check", "solve_euler_weights", "validate",
    "catalog", "catalog_list",
    "caustic_poly", "ll_map", "reconstruct_multiplication",
    "MetricField", "frobenius_report",
    "ChartDocument", "load_chart", "parse_chart",
]
