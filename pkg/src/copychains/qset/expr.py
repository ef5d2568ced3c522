"""Symbolic subsets of Q.

Leaves are residue-class dense sets, open intervals with cut endpoints,
explicit finite sets and ``Full``; inner nodes are union, intersection and
difference.  ``member`` evaluates an expression directly on a rational.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Tuple

from .cuts import NEG_INF, POS_INF, Cut, Rational

DEFAULT_MODULUS = 8


def residue_class(q: Rational, k: int) -> int:
    """Index i with q in DenseClass(i): numerator of q in lowest terms, mod k."""
    return Fraction(q).numerator % k


class QSetExpr:
    """Base class for expression nodes; supports ``|``, ``&`` and ``-``."""

    def __or__(self, other: "QSetExpr") -> "QSetExpr":
        return Union((self, other))

    def __and__(self, other: "QSetExpr") -> "QSetExpr":
        return Intersect((self, other))

    def __sub__(self, other: "QSetExpr") -> "QSetExpr":
        return Diff(self, other)

    def __contains__(self, q) -> bool:
        return member(q, self)


@dataclass(frozen=True)
class Full(QSetExpr):
    pass


@dataclass(frozen=True)
class DenseClass(QSetExpr):
    i: int
    k: int = DEFAULT_MODULUS

    def __post_init__(self):
        if not 0 <= self.i < self.k:
            raise ValueError(f"class index {self.i} outside 0..{self.k - 1}")


@dataclass(frozen=True)
class Interval(QSetExpr):
    """Open trace ``(lo, hi) & Q``."""

    lo: Cut = NEG_INF
    hi: Cut = POS_INF

    def __post_init__(self):
        object.__setattr__(self, "lo", Cut.of(self.lo))
        object.__setattr__(self, "hi", Cut.of(self.hi))

    @property
    def is_empty(self) -> bool:
        return not self.lo < self.hi


@dataclass(frozen=True)
class FiniteSet(QSetExpr):
    points: frozenset = field(default_factory=frozenset)

    def __init__(self, points: Iterable[Rational] = ()):
        pts = frozenset(Fraction(p) for p in points)
        object.__setattr__(self, "points", pts)


@dataclass(frozen=True)
class Union(QSetExpr):
    args: Tuple[QSetExpr, ...]

    def __init__(self, args: Iterable[QSetExpr]):
        object.__setattr__(self, "args", tuple(args))


@dataclass(frozen=True)
class Intersect(QSetExpr):
    args: Tuple[QSetExpr, ...]

    def __init__(self, args: Iterable[QSetExpr]):
        object.__setattr__(self, "args", tuple(args))


@dataclass(frozen=True)
class Diff(QSetExpr):
    left: QSetExpr
    right: QSetExpr


EMPTY = FiniteSet()
FULL = Full()


def closed_interval(lo: Rational, hi: Rational) -> QSetExpr:
    """``[lo, hi] & Q`` as an open interval plus its endpoints."""
    return Union((Interval(lo, hi), FiniteSet((lo, hi))))


def member(q: Rational, expr: QSetExpr) -> bool:
    q = Fraction(q)
    if isinstance(expr, Full):
        return True
    if isinstance(expr, DenseClass):
        return residue_class(q, expr.k) == expr.i
    if isinstance(expr, Interval):
        return expr.lo < q < expr.hi
    if isinstance(expr, FiniteSet):
        return q in expr.points
    if isinstance(expr, Union):
        return any(member(q, a) for a in expr.args)
    if isinstance(expr, Intersect):
        return all(member(q, a) for a in expr.args)
    if isinstance(expr, Diff):
        return member(q, expr.left) and not member(q, expr.right)
    # canonical forms (and anything else exposing .contains) act as leaves
    contains = getattr(expr, "contains", None)
    if contains is None:
        raise TypeError(f"not a set expression: {expr!r}")
    return contains(q)


def children(expr: QSetExpr) -> Tuple[QSetExpr, ...]:
    if isinstance(expr, (Union, Intersect)):
        return expr.args
    if isinstance(expr, Diff):
        return (expr.left, expr.right)
    return ()


def moduli(expr: QSetExpr) -> set:
    """All residue moduli mentioned in ``expr``."""
    out = set()
    stack = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, DenseClass):
            out.add(node.k)
        k = getattr(node, "modulus", None)
        if k is not None and not isinstance(node, DenseClass):
            out.add(k)
        stack.extend(children(node))
    return out
