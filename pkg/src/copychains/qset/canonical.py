"""Canonical forms and the decision procedures that run on them.

A canonical form is a sorted tuple of disjoint open pieces ``(lo, hi, mask)``
whose ``mask`` is the set of residue classes present on the piece (``None``
meaning every class), plus two finite correction sets: ``added`` members that
the pieces do not supply and ``removed`` non-members that they would.
Adjacent pieces with equal masks are always merged, so two expressions denote
the same subset of Q exactly when their canonical forms are equal.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .cuts import NEG_INF, POS_INF, Cut, Rational
from .enumeration import height_key
from .expr import (
    DEFAULT_MODULUS,
    DenseClass,
    Diff,
    FiniteSet,
    Full,
    Intersect,
    Interval,
    QSetExpr,
    Union,
    member,
    moduli,
    residue_class,
)

Mask = Optional[FrozenSet[int]]


@dataclass(frozen=True)
class Piece:
    lo: Cut
    hi: Cut
    mask: Mask  # None = all classes

    def covers(self, q: Fraction) -> bool:
        return self.lo < q < self.hi


@dataclass(frozen=True)
class CanonicalSet(QSetExpr):
    modulus: Optional[int]
    pieces: Tuple[Piece, ...]
    added: Tuple[Fraction, ...]
    removed: Tuple[Fraction, ...]

    def _piece_at(self, q: Fraction) -> Optional[Piece]:
        his = self.__dict__.get("_his")
        if his is None:
            his = [p.hi for p in self.pieces]
            object.__setattr__(self, "_his", his)
        i = bisect_left(his, q)
        # first piece with hi >= q; q inside it only if lo < q < hi
        if i < len(self.pieces) and self.pieces[i].covers(q):
            return self.pieces[i]
        return None

    def _default(self, q: Fraction) -> bool:
        piece = self._piece_at(q)
        if piece is None:
            return False
        return piece.mask is None or residue_class(q, self.modulus) in piece.mask

    def contains(self, q: Rational) -> bool:
        q = Fraction(q)
        if q in self._added_set:
            return True
        if q in self._removed_set:
            return False
        return self._default(q)

    @property
    def _added_set(self):
        s = self.__dict__.get("_aset")
        if s is None:
            s = frozenset(self.added)
            object.__setattr__(self, "_aset", s)
        return s

    @property
    def _removed_set(self):
        s = self.__dict__.get("_rset")
        if s is None:
            s = frozenset(self.removed)
            object.__setattr__(self, "_rset", s)
        return s

    @property
    def is_empty(self) -> bool:
        return not self.pieces and not self.added

    @property
    def is_finite(self) -> bool:
        return not self.pieces

    def breakpoints(self) -> List[Cut]:
        pts = []
        for p in self.pieces:
            pts.append(p.lo)
            pts.append(p.hi)
        pts.extend(Cut.of(q) for q in self.added)
        pts.extend(Cut.of(q) for q in self.removed)
        return pts

    def mask_on(self, lo: Cut, hi: Cut, k: int) -> FrozenSet[int]:
        """Mask on an open segment that none of the breakpoints split."""
        for p in self.pieces:
            if p.lo <= lo and hi <= p.hi:
                return frozenset(range(k)) if p.mask is None else p.mask
        return frozenset()

    def to_expr(self) -> QSetExpr:
        parts: List[QSetExpr] = []
        for p in self.pieces:
            iv = Interval(p.lo, p.hi)
            if p.mask is None:
                parts.append(iv)
            else:
                classes = Union(DenseClass(i, self.modulus) for i in sorted(p.mask))
                parts.append(Intersect((iv, classes)))
        if self.added:
            parts.append(FiniteSet(self.added))
        body: QSetExpr = Union(parts) if parts else FiniteSet()
        if self.removed:
            body = Diff(body, FiniteSet(self.removed))
        return body

    def __eq__(self, other):
        if not isinstance(other, CanonicalSet):
            return NotImplemented
        return (self.modulus, self.pieces, self.added, self.removed) == (
            other.modulus,
            other.pieces,
            other.added,
            other.removed,
        )

    def __hash__(self):
        return hash((self.modulus, self.pieces, self.added, self.removed))

    def __repr__(self):
        from .syntax import to_sexpr

        return f"CanonicalSet<{to_sexpr(self.to_expr())}>"


def _infer_modulus(expr: QSetExpr) -> int:
    ks = moduli(expr)
    if len(ks) > 1:
        raise ValueError(f"mixed residue moduli {sorted(ks)} in one expression")
    return ks.pop() if ks else DEFAULT_MODULUS


def _collect_breakpoints(expr: QSetExpr, out: set) -> None:
    stack = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, Interval):
            if node.lo.is_finite:
                out.add(node.lo)
            if node.hi.is_finite:
                out.add(node.hi)
        elif isinstance(node, FiniteSet):
            out.update(Cut.of(q) for q in node.points)
        elif isinstance(node, CanonicalSet):
            out.update(c for c in node.breakpoints() if c.is_finite)
        elif isinstance(node, (Union, Intersect)):
            stack.extend(node.args)
        elif isinstance(node, Diff):
            stack.append(node.left)
            stack.append(node.right)


def _mask(expr: QSetExpr, lo: Cut, hi: Cut, k: int) -> FrozenSet[int]:
    """Classes present on the unsplit open segment (lo, hi)."""
    if isinstance(expr, Full):
        return frozenset(range(k))
    if isinstance(expr, DenseClass):
        return frozenset((expr.i,))
    if isinstance(expr, Interval):
        return frozenset(range(k)) if expr.lo <= lo and hi <= expr.hi else frozenset()
    if isinstance(expr, FiniteSet):
        return frozenset()
    if isinstance(expr, Union):
        out = frozenset()
        for a in expr.args:
            out |= _mask(a, lo, hi, k)
        return out
    if isinstance(expr, Intersect):
        out = frozenset(range(k))
        for a in expr.args:
            out &= _mask(a, lo, hi, k)
            if not out:
                break
        return out
    if isinstance(expr, Diff):
        return _mask(expr.left, lo, hi, k) - _mask(expr.right, lo, hi, k)
    if isinstance(expr, CanonicalSet):
        return expr.mask_on(lo, hi, k)
    raise TypeError(f"not a set expression: {expr!r}")


def canonicalize(expr: QSetExpr) -> CanonicalSet:
    if isinstance(expr, CanonicalSet):
        return expr
    k = _infer_modulus(expr)
    cuts: set = set()
    _collect_breakpoints(expr, cuts)
    bps = sorted(cuts)
    bounds = [NEG_INF] + bps + [POS_INF]
    masks = [_mask(expr, bounds[i], bounds[i + 1], k) for i in range(len(bounds) - 1)]
    full = frozenset(range(k))

    pieces: List[List] = []  # [lo, hi, mask]
    added: List[Fraction] = []
    removed: List[Fraction] = []
    for i, mask in enumerate(masks):
        lo, hi = bounds[i], bounds[i + 1]
        if i > 0:
            bp = bounds[i]
            joined = masks[i - 1] == mask and bool(mask)
            if bp.is_rational:
                q = bp.rational()
                inside = member(q, expr)
                default = joined and residue_class(q, k) in mask
                if inside and not default:
                    added.append(q)
                elif default and not inside:
                    removed.append(q)
            if joined:
                pieces[-1][1] = hi
                continue
        if mask:
            pieces.append([lo, hi, mask])
    out_pieces = tuple(Piece(lo, hi, None if m == full else m) for lo, hi, m in pieces)
    partial = any(p.mask is not None for p in out_pieces)
    return CanonicalSet(
        modulus=k if partial else None,
        pieces=out_pieces,
        added=tuple(sorted(added)),
        removed=tuple(sorted(removed)),
    )


def equivalent(a: QSetExpr, b: QSetExpr) -> bool:
    return canonicalize(a) == canonicalize(b)


def is_subset(a: QSetExpr, b: QSetExpr) -> bool:
    return canonicalize(Diff(a, b)).is_empty


def is_empty(expr: QSetExpr) -> bool:
    return canonicalize(expr).is_empty


def is_finite_expr(expr: QSetExpr) -> Tuple[bool, Optional[int]]:
    """(True, cardinality) for finite sets, (False, None) otherwise."""
    c = canonicalize(expr)
    if c.is_finite:
        return True, len(c.added)
    return False, None


def finite_points(expr: QSetExpr) -> Tuple[Fraction, ...]:
    c = canonicalize(expr)
    if not c.is_finite:
        raise ValueError("expression is infinite")
    return c.added


def almost_subset(e: QSetExpr, f: QSetExpr) -> bool:
    """``e`` minus ``f`` is finite."""
    return canonicalize(Diff(e, f)).is_finite


# -- witnesses ---------------------------------------------------------------


def _int_bounds(lo: Cut, hi: Cut, b: int) -> Tuple[Optional[int], Optional[int]]:
    """Integers a with lo < a/b < hi, as an inclusive range (None = unbounded)."""
    a_min = None if lo == NEG_INF else lo.floor_times(b) + 1
    if hi == POS_INF:
        a_max = None
    else:
        f = hi.floor_times(b)
        a_max = f - 1 if hi.is_rational and hi.a * b == f else f
    return a_min, a_max


def _candidates_by_abs(a_min: Optional[int], a_max: Optional[int]):
    """Integers in [a_min, a_max] by increasing |a|, negatives first on ties."""
    if a_min is not None and a_max is not None and a_min > a_max:
        return
    if (a_min is None or a_min <= 0) and (a_max is None or a_max >= 0):
        yield 0
        n = 1
        while True:
            lo_ok = a_min is None or -n >= a_min
            hi_ok = a_max is None or n <= a_max
            if not lo_ok and not hi_ok:
                return
            if lo_ok:
                yield -n
            if hi_ok:
                yield n
            n += 1
    elif a_min is not None and a_min > 0:
        a = a_min
        while a_max is None or a <= a_max:
            yield a
            a += 1
    else:
        a = a_max
        while a_min is None or a >= a_min:
            yield a
            a -= 1


def min_height_rational(
    lo: Cut,
    hi: Cut,
    classes: Mask = None,
    k: int = DEFAULT_MODULUS,
    exclude: Iterable[Fraction] = (),
) -> Optional[Fraction]:
    """Least rational in ``(lo, hi)`` by (height, numerator, denominator).

    Restricted to residue classes ``classes`` mod ``k`` (all when None) and
    avoiding ``exclude``.  Returns None when the open interval is empty.
    """
    lo, hi = Cut.of(lo), Cut.of(hi)
    if not lo < hi or classes is not None and not classes:
        return None
    excluded = exclude if isinstance(exclude, (set, frozenset)) else set(exclude)
    best: Optional[Tuple[int, int, int]] = None
    b = 0
    while True:
        b += 1
        if best is not None and b > best[0]:
            break
        if classes is None:
            usable = None
        else:
            usable = {i for i in classes if math.gcd(math.gcd(i, k), b) == 1}
            if not usable:
                continue
        a_min, a_max = _int_bounds(lo, hi, b)
        for a in _candidates_by_abs(a_min, a_max):
            h = abs(a) + b
            if best is not None and h > best[0]:
                break
            if math.gcd(a, b) != 1:
                continue
            if usable is not None and a % k not in usable:
                continue
            q = Fraction(a, b)
            if q in excluded:
                continue
            key = (h, a, b)
            if best is None or key < best:
                best = key
            break  # later a at this b have larger |a|, or equal |a| but larger numerator
    if best is None:
        return None
    return Fraction(best[1], best[2])


def witness_in(expr: QSetExpr, lo: "Cut | Rational" = NEG_INF, hi: "Cut | Rational" = POS_INF) -> Optional[Fraction]:
    """Least-height member of ``expr`` inside the open interval ``(lo, hi)``."""
    lo, hi = Cut.of(lo), Cut.of(hi)
    if not lo < hi:
        return None
    c = canonicalize(Intersect((expr, Interval(lo, hi))))
    found: List[Fraction] = list(c.added)
    removed = frozenset(c.removed)
    for p in c.pieces:
        q = min_height_rational(p.lo, p.hi, p.mask, c.modulus or DEFAULT_MODULUS, removed)
        if q is not None:
            found.append(q)
    if not found:
        return None
    return min(found, key=height_key)


def witnesses(expr: QSetExpr, n: int, lo=NEG_INF, hi=POS_INF) -> List[Fraction]:
    """The first ``n`` members of ``expr`` in (lo, hi) by height order (fewer if finite)."""
    out: List[Fraction] = []
    current = expr
    for _ in range(n):
        q = witness_in(current, lo, hi)
        if q is None:
            break
        out.append(q)
        current = Diff(current, FiniteSet((q,)))
    return out


def dense_in(expr: QSetExpr, lo: "Cut | Rational" = NEG_INF, hi: "Cut | Rational" = POS_INF) -> bool:
    """Every nonempty open subinterval of (lo, hi) meets ``expr``."""
    lo, hi = Cut.of(lo), Cut.of(hi)
    if not lo < hi:
        return True
    c = canonicalize(expr)
    cur = lo
    for p in c.pieces:
        if p.hi <= cur:
            continue
        if cur < p.lo:
            return False
        cur = p.hi
        if not cur < hi:
            return True
    return not cur < hi


def sup_of(expr: QSetExpr) -> Optional[Cut]:
    c = canonicalize(expr)
    if c.is_empty:
        return None
    cands = [Cut.of(q) for q in c.added[-1:]]
    if c.pieces:
        cands.append(c.pieces[-1].hi)
    return max(cands)


def inf_of(expr: QSetExpr) -> Optional[Cut]:
    c = canonicalize(expr)
    if c.is_empty:
        return None
    cands = [Cut.of(q) for q in c.added[:1]]
    if c.pieces:
        cands.append(c.pieces[0].lo)
    return min(cands)


def max_of(expr: QSetExpr) -> Optional[Fraction]:
    """The largest member, or None when the set has no maximum."""
    c = canonicalize(expr)
    if c.is_empty:
        raise ValueError("max_of an empty set")
    top = c.added[-1] if c.added else None
    if not c.pieces:
        return top
    if top is not None and not top < c.pieces[-1].hi:
        return top
    return None


def min_of(expr: QSetExpr) -> Optional[Fraction]:
    c = canonicalize(expr)
    if c.is_empty:
        raise ValueError("min_of an empty set")
    bottom = c.added[0] if c.added else None
    if not c.pieces:
        return bottom
    if bottom is not None and not c.pieces[0].lo < bottom:
        return bottom
    return None


def is_order_dense(expr: QSetExpr) -> bool:
    """Between any two members lies a third."""
    c = canonicalize(expr)
    for p, r in zip(c.added, c.added[1:]):
        if not any(piece.lo < r and p < piece.hi for piece in c.pieces):
            return False
    return True


def is_rational_copy(expr: QSetExpr) -> bool:
    """Nonempty, no endpoints, order-dense: isomorphic to (Q, <) by Cantor."""
    c = canonicalize(expr)
    if c.is_empty:
        return False
    return max_of(c) is None and min_of(c) is None and is_order_dense(c)


def restrict_to(expr: QSetExpr, lo, hi) -> CanonicalSet:
    return canonicalize(Intersect((expr, Interval(lo, hi))))


def union_all(parts: Sequence[QSetExpr]) -> CanonicalSet:
    return canonicalize(Union(parts) if parts else FiniteSet())
