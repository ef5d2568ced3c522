"""Finite strict partial orders, structure maps and one-point extension types."""

from .posets import (
    FinPoset,
    PosetError,
    age,
    all_posets,
    automorphisms,
    canonical_form,
    embeddings,
    find_embedding,
    is_isomorphic,
    is_partial_iso,
    is_ultrahomogeneous,
    is_ultrahomogeneous_by_extension,
    iter_embeddings,
    one_point_extensions,
    partial_isos,
    poset_from_canonical,
    restrict,
    transitive_closure,
)
from .triples import (
    Triple,
    TripleError,
    enumerate_triples,
    is_random_up_to,
    iter_triples,
    realizers,
)

__all__ = [
    "FinPoset",
    "PosetError",
    "Triple",
    "TripleError",
    "age",
    "all_posets",
    "automorphisms",
    "canonical_form",
    "embeddings",
    "enumerate_triples",
    "find_embedding",
    "is_isomorphic",
    "is_partial_iso",
    "is_random_up_to",
    "is_ultrahomogeneous",
    "is_ultrahomogeneous_by_extension",
    "iter_embeddings",
    "iter_triples",
    "one_point_extensions",
    "partial_isos",
    "poset_from_canonical",
    "realizers",
    "restrict",
    "transitive_closure",
]
