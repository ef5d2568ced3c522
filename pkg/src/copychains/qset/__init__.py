"""Decidable symbolic subsets of the rationals."""

from .canonical import (
    CanonicalSet,
    Piece,
    almost_subset,
    canonicalize,
    dense_in,
    equivalent,
    finite_points,
    inf_of,
    is_empty,
    is_finite_expr,
    is_order_dense,
    is_rational_copy,
    is_subset,
    max_of,
    min_height_rational,
    min_of,
    sup_of,
    witness_in,
    witnesses,
)
from .cuts import NEG_INF, POS_INF, Cut, parse_cut, sqrt2_plus
from .enumeration import RATIONALS, height, height_key, rationals_by_height
from .expr import (
    DEFAULT_MODULUS,
    EMPTY,
    FULL,
    DenseClass,
    Diff,
    FiniteSet,
    Full,
    Intersect,
    Interval,
    QSetExpr,
    Union,
    closed_interval,
    member,
    residue_class,
)
from .syntax import from_json, parse_sexpr, to_json, to_sexpr

__all__ = [
    "CanonicalSet",
    "Cut",
    "DEFAULT_MODULUS",
    "DenseClass",
    "Diff",
    "EMPTY",
    "FULL",
    "FiniteSet",
    "Full",
    "Intersect",
    "Interval",
    "NEG_INF",
    "POS_INF",
    "Piece",
    "QSetExpr",
    "RATIONALS",
    "Union",
    "almost_subset",
    "canonicalize",
    "closed_interval",
    "dense_in",
    "equivalent",
    "finite_points",
    "from_json",
    "height",
    "height_key",
    "inf_of",
    "is_empty",
    "is_finite_expr",
    "is_order_dense",
    "is_rational_copy",
    "is_subset",
    "max_of",
    "member",
    "min_height_rational",
    "min_of",
    "parse_cut",
    "parse_sexpr",
    "rationals_by_height",
    "residue_class",
    "sqrt2_plus",
    "sup_of",
    "to_json",
    "to_sexpr",
    "witness_in",
    "witnesses",
]
