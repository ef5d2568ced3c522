"""One-point extension types <L, G, U> over a host order, and their realizers."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterable, Iterator, List, Optional, Tuple

from .posets import FinPoset, Label, PosetError


class TripleError(PosetError):
    pass


@dataclass(frozen=True)
class Triple:
    """Sets required below (L), above (G) and incomparable (U) to a new point."""

    L: FrozenSet[Label] = frozenset()
    G: FrozenSet[Label] = frozenset()
    U: FrozenSet[Label] = frozenset()

    def __init__(self, L: Iterable[Label] = (), G: Iterable[Label] = (), U: Iterable[Label] = ()):
        L, G, U = frozenset(L), frozenset(G), frozenset(U)
        if L & G or L & U or G & U:
            raise TripleError("L, G, U must be pairwise disjoint")
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "U", U)

    @property
    def support(self) -> FrozenSet[Label]:
        return self.L | self.G | self.U

    def __len__(self) -> int:
        return len(self.L) + len(self.G) + len(self.U)

    @property
    def m(self) -> Optional[Fraction]:
        """Largest point of the support in the rational order (None when empty)."""
        if not len(self):
            return None
        return max(Fraction(x) for x in self.support)

    def violation(self, P: FinPoset) -> Optional[str]:
        """Why the triple is outside C(P), or None when it is inside."""
        for x in self.support:
            if x not in P:
                return f"label {x!r} not in the host order"
        for l in self.L:
            for g in self.G:
                if not P.less(l, g):
                    return f"C1: {l!r} is not below {g!r}"
            for u in self.U:
                if P.less(u, l):
                    return f"C2: {u!r} is below {l!r}"
        for g in self.G:
            for u in self.U:
                if P.less(g, u):
                    return f"C3: {g!r} is below {u!r}"
        return None

    def consistent_with(self, P: FinPoset) -> bool:
        return self.violation(P) is None

    def realized_by(self, P: FinPoset, p: Label) -> bool:
        if p in self.support:
            return False
        return (
            all(P.less(l, p) for l in self.L)
            and all(P.less(p, g) for g in self.G)
            and all(P.incomparable(p, u) for u in self.U)
        )

    def sort_key(self, P: FinPoset) -> Tuple:
        idx = P.index
        return (
            len(self),
            sorted(idx[x] for x in self.support),
            sorted(idx[x] for x in self.L),
            sorted(idx[x] for x in self.G),
        )

    def to_json(self) -> dict:
        return {k: sorted(str(x) for x in getattr(self, k)) for k in ("L", "G", "U")}

    def __str__(self) -> str:
        def fmt(s):
            return "{" + ", ".join(sorted(map(str, s))) + "}"

        return f"<{fmt(self.L)}, {fmt(self.G)}, {fmt(self.U)}>"


def role_assignments(labels: Tuple[Label, ...]) -> Iterator[Triple]:
    """Every split of ``labels`` into (L, G, U), roles in lexicographic order."""
    for roles in itertools.product(range(3), repeat=len(labels)):
        parts = ([], [], [])
        for x, r in zip(labels, roles):
            parts[r].append(x)
        yield Triple(*parts)


def iter_triples(P: FinPoset, k: int, labels: Optional[Iterable[Label]] = None) -> Iterator[Triple]:
    """Triples in C(P) over ``labels`` (default all) with at most k points.

    Order: by size, then support by index, then role assignment.
    """
    pool = P.elements if labels is None else tuple(x for x in P.elements if x in set(labels))
    for r in range(0, min(k, len(pool)) + 1):
        for support in itertools.combinations(pool, r):
            for t in role_assignments(support):
                if t.consistent_with(P):
                    yield t


def enumerate_triples(P: FinPoset, k: int) -> List[Triple]:
    return list(iter_triples(P, k))


def realizers(P: FinPoset, t: Triple) -> FrozenSet[Label]:
    why = t.violation(P)
    if why is not None:
        raise TripleError(f"triple {t} is not consistent: {why}")
    return frozenset(p for p in P.elements if t.realized_by(P, p))


def is_random_up_to(
    P: FinPoset, k: int, core: Optional[Iterable[Label]] = None
) -> Tuple[bool, Optional[Triple]]:
    """Every consistent triple of size <= k over ``core`` has a realizer in P.

    ``core`` defaults to all of P; realizers may lie anywhere in P.
    """
    for t in iter_triples(P, k, core):
        if not any(t.realized_by(P, p) for p in P.elements):
            return False, t
    return True, None
