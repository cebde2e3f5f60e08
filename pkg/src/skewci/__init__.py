"""Exact computations for graded skew Clifford algebras and complete intersections."""

__version__ = "0.1.0"

from .coeff import QQ, QQ_q, PrimeScalar, RationalFunction
from .conditions import (
    ConditionReport,
    FamilySpec,
    SkewModel,
    check_conditions,
    complete_intersection_verdict,
)
from .freealg import MonomialOrder, NCPoly
from .geometry import ParametricPointFamily, annihilates, search_annihilated_point, verify_family
from .gsca import GscaInput, certify_regular, eliminate_y
from .manifest import Manifest, SchemaError, parse_manifest, serialize_manifest
from .rewrite import Presentation, classify_growth, complete_truncated, hilbert_function, normal_form
from .skew import MuSymMatrix, QuadricSystem, base_point_free, is_normal, validate_mu

__all__ = [
    "QQ", "QQ_q", "PrimeScalar", "RationalFunction",
    "ConditionReport", "FamilySpec", "SkewModel", "check_conditions", "complete_intersection_verdict",
    "MonomialOrder", "NCPoly",
    "ParametricPointFamily", "annihilates", "search_annihilated_point", "verify_family",
    "GscaInput", "certify_regular", "eliminate_y",
    "Manifest", "SchemaError", "parse_manifest", "serialize_manifest",
    "Presentation", "classify_growth", "complete_truncated", "hilbert_function", "normal_form",
    "MuSymMatrix", "QuadricSystem", "base_point_free", "is_normal", "validate_mu",
]
