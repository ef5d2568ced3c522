"""The countable ultrahomogeneous posets as concrete structures.

Each structure has an order predicate on explicit encodings and a copy test
on finitely described subsets:

    A_omega   naturals, empty relation
    Q         rationals, the usual order
    B_n       pairs (i, q), i < n: comparable only on the same line
    B_omega   rationals split into blocks (x_{i+1}, x_i), x_0 = inf, x_i = sqrt2 - i
    C_n       pairs (q, i), i < n: ordered by q alone
    C_omega   pairs (q, i), i >= 0: ordered by q alone
    D         rationals under a GenericOrder
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from . import verdicts
from .generic import GenericOrder, is_copy_of_D
from .order import FinPoset
from .qset import (
    EMPTY,
    FULL,
    POS_INF,
    CanonicalSet,
    Cut,
    FiniteSet,
    Interval,
    QSetExpr,
    canonicalize,
    from_json,
    is_order_dense,
    max_of,
    min_of,
    sqrt2_plus,
    to_json,
    witness_in,
    witnesses,
)
from .qset.expr import Diff, Intersect, Union

STRUCTURE_IDS = ("A_omega", "Q", "B_n", "B_omega", "C_n", "C_omega", "D")


class EncodingError(ValueError):
    pass


# -- fibers and product sets ------------------------------------------------------


@dataclass(frozen=True)
class FiberSpec:
    """A finite subset of omega, or the complement of one."""

    cofinite: bool
    points: FrozenSet[int] = frozenset()

    def __init__(self, cofinite: bool, points: Iterable[int] = ()):
        pts = frozenset(int(i) for i in points)
        if any(i < 0 for i in pts):
            raise ValueError("fiber indices are natural numbers")
        object.__setattr__(self, "cofinite", bool(cofinite))
        object.__setattr__(self, "points", pts)

    @classmethod
    def finite(cls, points: Iterable[int]) -> "FiberSpec":
        return cls(False, points)

    @classmethod
    def cofinite_of(cls, missing: Iterable[int] = ()) -> "FiberSpec":
        return cls(True, missing)

    def __contains__(self, i: int) -> bool:
        return (i in self.points) != self.cofinite

    @property
    def is_empty(self) -> bool:
        return not self.cofinite and not self.points

    @property
    def is_infinite(self) -> bool:
        return self.cofinite

    def within(self, n: Optional[int]) -> "FiberSpec":
        if n is None:
            return self
        return FiberSpec.finite(i for i in range(n) if i in self)

    def to_json(self):
        if not self.cofinite:
            return {"finite": sorted(self.points)}
        return {"cofinite": sorted(self.points)}

    @classmethod
    def from_json(cls, obj) -> "FiberSpec":
        if obj == "omega":
            return OMEGA
        if obj == "omega+":
            return OMEGA_PLUS
        if isinstance(obj, list):
            return cls.finite(obj)
        if "finite" in obj:
            return cls.finite(obj["finite"])
        return cls.cofinite_of(obj["cofinite"])

    def __str__(self):
        if self == OMEGA:
            return "omega"
        if self == OMEGA_PLUS:
            return "omega+"
        body = ",".join(map(str, sorted(self.points)))
        return f"omega\\{{{body}}}" if self.cofinite else f"{{{body}}}"


OMEGA = FiberSpec.cofinite_of()
OMEGA_PLUS = FiberSpec.cofinite_of([0])
NO_FIBER = FiberSpec.finite(())

REST = "rest"


@dataclass(frozen=True)
class _Atoms:
    """A product set split by fiber atoms: each listed index, plus everything else."""

    keys: Tuple[int, ...]
    by_key: Dict[int, CanonicalSet]
    rest: CanonicalSet

    def at(self, i: int) -> CanonicalSet:
        return self.by_key.get(i, self.rest)


@dataclass(frozen=True)
class ProductSetExpr:
    """Union of E x F over components (E a set of rationals, F a fiber spec).

    Rationals come first in the pair: elements are (q, i).  For B_n the
    fiber index is the line number.
    """

    components: Tuple[Tuple[QSetExpr, FiberSpec], ...] = ()

    def __init__(self, components: Iterable[Tuple[QSetExpr, FiberSpec]] = ()):
        comps = []
        for E, F in components:
            if not isinstance(F, FiberSpec):
                F = FiberSpec.finite(F)
            comps.append((E, F))
        object.__setattr__(self, "components", tuple(comps))

    @classmethod
    def times(cls, E: QSetExpr, F: FiberSpec) -> "ProductSetExpr":
        return cls([(E, F)])

    @classmethod
    def times_n(cls, E: QSetExpr, n: int) -> "ProductSetExpr":
        return cls([(E, FiberSpec.finite(range(n)))])

    @classmethod
    def points(cls, pairs: Iterable[Tuple[Any, int]]) -> "ProductSetExpr":
        return cls([(FiniteSet([q]), FiberSpec.finite([i])) for q, i in pairs])

    def keys(self) -> FrozenSet[int]:
        out = set()
        for _, F in self.components:
            out |= F.points
        return frozenset(out)

    def atoms(self, n: Optional[int] = None, extra: Iterable[int] = ()) -> _Atoms:
        if n is not None:
            keys = tuple(range(n))
        else:
            keys = tuple(sorted(self.keys() | set(extra)))
        by_key = {}
        for i in keys:
            by_key[i] = canonicalize(Union([E for E, F in self.components if i in F]))
        if n is not None:
            rest = canonicalize(EMPTY)
        else:
            # an index outside every listed set lies in exactly the cofinite fibers
            rest = canonicalize(Union([E for E, F in self.components if F.cofinite]))
        return _Atoms(keys, by_key, rest)

    def contains(self, pair, n: Optional[int] = None) -> bool:
        q, i = pair
        if n is not None and not 0 <= i < n:
            return False
        return any(i in F and Fraction(q) in E for E, F in self.components)

    def __contains__(self, pair) -> bool:
        return self.contains(pair)

    def __or__(self, other: "ProductSetExpr") -> "ProductSetExpr":
        return ProductSetExpr(self.components + other.components)

    def to_json(self) -> list:
        return [{"set": to_json(E), "fiber": F.to_json()} for E, F in self.components]

    @classmethod
    def from_json(cls, obj, modulus: int = 8) -> "ProductSetExpr":
        return cls((from_json(c["set"], modulus), FiberSpec.from_json(c["fiber"])) for c in obj)


def _from_atoms(a: _Atoms, n: Optional[int]) -> ProductSetExpr:
    """Normal form: one component per distinct nonempty atom set."""
    groups: Dict[CanonicalSet, List[int]] = {}
    for i in a.keys:
        groups.setdefault(a.at(i), []).append(i)
    comps = []
    rest_keys = set()
    if n is None and not a.rest.is_empty:
        rest_keys = set(groups.pop(a.rest, []))
    for S, idx in sorted(groups.items(), key=lambda kv: kv[1]):
        if not S.is_empty:
            comps.append((S, FiberSpec.finite(idx)))
    if n is None and not a.rest.is_empty:
        missing = set(a.keys) - rest_keys
        comps.append((a.rest, FiberSpec.cofinite_of(missing)))
    return ProductSetExpr(comps)


def _combine(op, X: ProductSetExpr, Y: ProductSetExpr, n: Optional[int]) -> ProductSetExpr:
    keys = X.keys() | Y.keys()
    ax, ay = X.atoms(n, keys), Y.atoms(n, keys)
    by_key = {i: canonicalize(op(ax.at(i), ay.at(i))) for i in ax.keys}
    rest = canonicalize(op(ax.rest, ay.rest))
    return _from_atoms(_Atoms(ax.keys, by_key, rest), n)


def product_union(X, Y, n=None) -> ProductSetExpr:
    return _combine(lambda a, b: Union((a, b)), X, Y, n)


def product_inter(X, Y, n=None) -> ProductSetExpr:
    return _combine(lambda a, b: Intersect((a, b)), X, Y, n)


def product_diff(X, Y, n=None) -> ProductSetExpr:
    return _combine(Diff, X, Y, n)


def normalize(X: ProductSetExpr, n: Optional[int] = None) -> ProductSetExpr:
    return _from_atoms(X.atoms(n), n)


def product_equal(X, Y, n=None) -> bool:
    return normalize(product_diff(X, Y, n), n).components == () and normalize(product_diff(Y, X, n), n).components == ()


def product_subset(X, Y, n=None) -> bool:
    return normalize(product_diff(X, Y, n), n).components == ()


def product_is_empty(X, n=None) -> bool:
    return normalize(X, n).components == ()


def supp(X: ProductSetExpr, n: Optional[int] = None) -> CanonicalSet:
    """Rationals whose fiber meets X."""
    return canonicalize(Union([E for E, F in X.components if not F.within(n).is_empty]))


def fiber_of(X: ProductSetExpr, q, n: Optional[int] = None) -> FiberSpec:
    a = X.atoms(n)
    q = Fraction(q)
    listed = [i for i in a.keys if q in a.at(i)]
    if n is None and q in a.rest:
        return FiberSpec.cofinite_of(set(a.keys) - set(listed))
    return FiberSpec.finite(listed)


# -- structures ---------------------------------------------------------------------


@dataclass(frozen=True)
class AmbientStructure:
    id: str
    n: Optional[int] = None
    generic: Optional[GenericOrder] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.id not in STRUCTURE_IDS:
            raise EncodingError(f"unknown structure {self.id!r}")
        if self.id in ("B_n", "C_n"):
            if self.n is None or self.n < 1:
                raise EncodingError(f"{self.id} needs n >= 1")
        elif self.n is not None:
            raise EncodingError(f"{self.id} takes no n")

    @property
    def name(self) -> str:
        if self.id in ("B_n", "C_n"):
            return f"{self.id[0]}_{self.n}"
        return self.id

    def descriptor(self) -> dict:
        d = {"id": self.id}
        if self.n is not None:
            d["n"] = self.n
        return d


def A_omega() -> AmbientStructure:
    return AmbientStructure("A_omega")


def Q_line() -> AmbientStructure:
    return AmbientStructure("Q")


def B(n: int) -> AmbientStructure:
    return AmbientStructure("B_n", n)


def B_omega() -> AmbientStructure:
    return AmbientStructure("B_omega")


def C(n: int) -> AmbientStructure:
    return AmbientStructure("C_n", n)


def C_omega() -> AmbientStructure:
    return AmbientStructure("C_omega")


def D(g: Optional[GenericOrder] = None) -> AmbientStructure:
    return AmbientStructure("D", generic=g if g is not None else GenericOrder())


def parse_structure(desc, generic: Optional[GenericOrder] = None) -> AmbientStructure:
    """From {"id": "B_n", "n": 3} or a short name like "C_3", "C_omega", "D"."""
    if isinstance(desc, dict):
        ident = desc["id"]
        n = desc.get("n")
    else:
        text = str(desc).strip()
        aliases = {"A_omega": "A_omega", "Q": "Q", "B_omega": "B_omega", "C_omega": "C_omega", "D": "D"}
        if text in aliases:
            ident, n = aliases[text], None
        elif len(text) > 2 and text[0] in "BC" and text[1] == "_" and text[2:].isdigit():
            ident, n = text[0] + "_n", int(text[2:])
        else:
            raise EncodingError(f"unknown structure {text!r}")
    if ident == "D":
        return D(generic)
    return AmbientStructure(ident, n)


# B_omega blocks ------------------------------------------------------------------


def block_cut(i: int) -> Cut:
    """x_i: x_0 = inf and x_i = sqrt2 - i for i >= 1."""
    if i == 0:
        return POS_INF
    return sqrt2_plus(-i)


def block_of(q) -> int:
    """The i with x_{i+1} < q < x_i."""
    q = Fraction(q)
    # sqrt2 - q is irrational, so floor is strict on both sides
    return max(0, Cut.quadratic(-q, 1).floor_times(1))


def block_interval(i: int) -> Interval:
    return Interval(block_cut(i + 1), block_cut(i))


# order predicates ------------------------------------------------------------------


def _rat(x) -> Fraction:
    if isinstance(x, float) or isinstance(x, bool):
        raise EncodingError(f"not an exact rational: {x!r}")
    try:
        return Fraction(x)
    except (TypeError, ValueError) as exc:
        raise EncodingError(f"not a rational: {x!r}") from exc


def _cmp(a, b) -> str:
    if a == b:
        return "equal"
    return "below" if a < b else "above"


def _pair(S: AmbientStructure, x):
    if not (isinstance(x, tuple) and len(x) == 2):
        raise EncodingError(f"{S.name} elements are pairs, got {x!r}")
    if S.id == "B_n":
        i, q = x
    else:
        q, i = x
    if not isinstance(i, int) or i < 0 or (S.n is not None and i >= S.n):
        raise EncodingError(f"index {i!r} outside {S.name}")
    return _rat(q), i


def order_pred(S: AmbientStructure, a, b) -> str:
    """One of "below", "above", "incomparable", "equal"."""
    if S.id == "A_omega":
        for x in (a, b):
            if not isinstance(x, int) or isinstance(x, bool) or x < 0:
                raise EncodingError(f"A_omega elements are naturals, got {x!r}")
        return "equal" if a == b else "incomparable"
    if S.id == "Q":
        return _cmp(_rat(a), _rat(b))
    if S.id == "D":
        return S.generic.query(_rat(a), _rat(b))
    if S.id == "B_omega":
        qa, qb = _rat(a), _rat(b)
        if qa == qb:
            return "equal"
        if block_of(qa) != block_of(qb):
            return "incomparable"
        return _cmp(qa, qb)
    (qa, ia), (qb, ib) = _pair(S, a), _pair(S, b)
    if (qa, ia) == (qb, ib):
        return "equal"
    if S.id == "B_n":
        if ia != ib:
            return "incomparable"
        return _cmp(qa, qb)
    # C_n and C_omega: the fiber index is ignored
    if qa == qb:
        return "incomparable"
    return _cmp(qa, qb)


def sample_poset(S: AmbientStructure, elements: Sequence) -> FinPoset:
    els = list(elements)
    lt = [(a, b) for a in els for b in els if order_pred(S, a, b) == "below"]
    return FinPoset(els, lt)


def sample_elements(S: AmbientStructure, count: int) -> list:
    """The first ``count`` elements of a fixed enumeration of the universe."""
    from .qset import RATIONALS

    if S.id == "A_omega":
        return list(range(count))
    if S.id in ("Q", "B_omega", "D"):
        return [RATIONALS[i] for i in range(count)]
    width = S.n if S.n is not None else 3
    out = []
    for j in itertools.count():
        for i in range(width):
            if len(out) == count:
                return out
            q = RATIONALS[j]
            out.append((i, q) if S.id == "B_n" else (q, i))
    return out


# -- copy tests ---------------------------------------------------------------------


def rational_copy_verdict(E: QSetExpr) -> verdicts.Verdict:
    """Copy of (Q, <): nonempty, no endpoints, order-dense."""
    c = canonicalize(E)
    if c.is_empty:
        return verdicts.not_copy("empty set")
    top = max_of(c)
    if top is not None:
        return verdicts.not_copy(f"maximum {top}", top)
    bottom = min_of(c)
    if bottom is not None:
        return verdicts.not_copy(f"minimum {bottom}", bottom)
    if not is_order_dense(c):
        pts = c.added
        for p, r in zip(pts, pts[1:]):
            if not any(piece.lo < r and p < piece.hi for piece in c.pieces):
                return verdicts.not_copy(f"jump between {p} and {r}", (p, r))
    return verdicts.copy("nonempty, no endpoints, order-dense")


def _nat_set_infinite(X) -> bool:
    if isinstance(X, FiberSpec):
        return X.is_infinite
    if isinstance(X, (set, frozenset, list, tuple)):
        return False
    raise EncodingError("A_omega subsets are FiberSpec values or finite collections")


def is_copy(S: AmbientStructure, X, **opts) -> verdicts.Verdict:
    if S.id == "A_omega":
        if _nat_set_infinite(X):
            return verdicts.copy("infinite subset of an antichain")
        return verdicts.not_copy("finite subset", sorted(getattr(X, "points", X)))
    if S.id == "Q":
        return rational_copy_verdict(_as_qset(S, X))
    if S.id == "D":
        return is_copy_of_D(_as_qset(S, X), g=S.generic, **opts)
    if S.id == "B_omega":
        return _copy_B_omega(_as_qset(S, X))
    X = _as_product(S, X)
    if S.id == "B_n":
        return _copy_B_n(S.n, X)
    if S.id == "C_n":
        return _copy_C_n(S.n, X)
    return _copy_C_omega(X)


def _as_qset(S, X) -> QSetExpr:
    if isinstance(X, ProductSetExpr):
        raise EncodingError(f"{S.name} subsets are sets of rationals")
    return X


def _as_product(S, X) -> ProductSetExpr:
    if not isinstance(X, ProductSetExpr):
        raise EncodingError(f"{S.name} subsets are product sets")
    return X


def _copy_B_n(n: int, X: ProductSetExpr) -> verdicts.Verdict:
    # an embedding sends the n lines injectively into the n lines
    a = X.atoms(n)
    for i in range(n):
        v = rational_copy_verdict(a.at(i))
        if not v.is_copy:
            return verdicts.not_copy(f"line {i}: {v.reason}", (i, v.witness))
    return verdicts.copy("every line is a copy of Q")


def _copy_C_n(n: int, X: ProductSetExpr) -> verdicts.Verdict:
    a = X.atoms(n)
    full = canonicalize(Union([a.at(i) for i in range(n)]))
    for i in range(n):
        if a.at(i) != full:
            q = witness_in(Diff(full, a.at(i)))
            return verdicts.not_copy(
                f"class of {q} meets only {sum(q in a.at(j) for j in range(n))} of {n} fibers", (q, i)
            )
    v = rational_copy_verdict(full)
    if not v.is_copy:
        return verdicts.not_copy(f"rational part: {v.reason}", v.witness)
    return verdicts.copy("A x n with A a copy of Q", full)


def _copy_C_omega(X: ProductSetExpr) -> verdicts.Verdict:
    s = supp(X)
    if s.is_empty:
        return verdicts.not_copy("empty set")
    top = max_of(s)
    if top is not None:
        return verdicts.not_copy(f"supp has maximum {top}", top)
    a = X.atoms()
    # an index outside the listed keys sees exactly the rest set
    thin = canonicalize(Diff(s, a.rest))
    if not thin.is_empty:
        q = witness_in(thin)
        return verdicts.not_copy(f"fiber over {q} is finite", q)
    v = rational_copy_verdict(s)
    if not v.is_copy:
        return verdicts.not_copy(f"supp: {v.reason}", v.witness)
    return verdicts.copy("every fiber infinite and supp a copy of Q", s)


def _copy_B_omega(E: QSetExpr) -> verdicts.Verdict:
    c = canonicalize(E)
    if c.is_empty:
        return verdicts.not_copy("empty set")
    finite_bps = [b for b in c.breakpoints() if b.is_finite]
    # below every breakpoint the trace is uniform, so blocks past `last` repeat block `last`
    last = max((block_of(b.floor_times(1)) for b in finite_bps), default=0) + 1
    for i in range(last + 1):
        trace = canonicalize(Intersect((c, block_interval(i))))
        if trace.is_empty:
            continue
        v = rational_copy_verdict(trace)
        if not v.is_copy:
            return verdicts.not_copy(f"block {i}: {v.reason}", (i, v.witness))
    tail = canonicalize(Intersect((c, block_interval(last))))
    if tail.is_empty:
        return verdicts.not_copy(f"only blocks below {last} are used", last)
    return verdicts.copy("infinitely many blocks, each trace a copy of Q")


# -- positive families --------------------------------------------------------------


@dataclass(frozen=True)
class SetOps:
    """The set operations a positive-family check needs, for one universe."""

    empty: Any
    union: Callable[[Any, Any], Any]
    diff: Callable[[Any, Any], Any]
    subset: Callable[[Any, Any], bool]
    points: Callable[[Any, int], list]
    finite: Callable[[list], Any]
    coinfinite: Callable[[Any], bool]
    show: Callable[[Any], str]


def _qset_show(E) -> str:
    from .qset import to_sexpr

    return to_sexpr(canonicalize(E))


QSET_OPS = SetOps(
    empty=EMPTY,
    union=lambda a, b: canonicalize(Union((a, b))),
    diff=lambda a, b: canonicalize(Diff(a, b)),
    subset=lambda a, b: canonicalize(Diff(a, b)).is_empty,
    points=lambda a, k: witnesses(a, k),
    finite=lambda pts: FiniteSet(pts),
    coinfinite=lambda a: not canonicalize(Diff(FULL, a)).is_finite,
    show=_qset_show,
)


def product_ops(n: Optional[int]) -> SetOps:
    def points(X, k):
        a = X.atoms(n)
        out = []
        for i in a.keys:
            for q in witnesses(a.at(i), k):
                out.append((q, i))
        out.sort(key=lambda p: (p[1], p[0]))
        return out[:k]

    def coinfinite(X):
        # the complement of X in Q x n (or Q x omega) is infinite unless X is cofinite
        comp = product_diff(ProductSetExpr.times(FULL, OMEGA), X, n)
        return any(not canonicalize(E).is_finite for E, _ in comp.components) or (
            n is None and any(F.cofinite for _, F in comp.components)
        )

    def show(X):
        parts = [f"{_qset_show(E)} x {F}" for E, F in normalize(X, n).components]
        return " u ".join(parts) or "(empty)"

    return SetOps(
        empty=ProductSetExpr(),
        union=lambda a, b: product_union(a, b, n),
        diff=lambda a, b: product_diff(a, b, n),
        subset=lambda a, b: product_subset(a, b, n),
        points=points,
        finite=lambda pts: ProductSetExpr.points(pts),
        coinfinite=coinfinite,
        show=show,
    )


@dataclass
class AxiomResult:
    axiom: str
    passed: bool
    checked: int
    witness: Optional[str] = None

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "status": "PASS" if self.passed else "FAIL", "checked": self.checked, "witness": self.witness}


def _show_point(p) -> str:
    if isinstance(p, tuple):
        return "(" + ",".join(str(v) for v in p) + ")"
    return str(p)


def positive_family_axioms(
    member: Callable[[Any], bool],
    samples: Sequence[Any],
    ops: SetOps = QSET_OPS,
    deletions: int = 2,
) -> Dict[str, AxiomResult]:
    """Check (P1)-(P4) for the family {X : member(X)} on sampled sets.

    (P2) tests every sampled member against unions with every sample;
    (P3) removes up to ``deletions`` points of each sampled member.
    """
    out: Dict[str, AxiomResult] = {}
    out["P1"] = AxiomResult("P1", not member(ops.empty), 1, None if not member(ops.empty) else "empty set is a member")
    members = [X for X in samples if member(X)]

    checked, witness = 0, None
    for X in members:
        for Y in samples:
            Z = ops.union(X, Y)
            checked += 1
            if not member(Z):
                witness = f"{ops.show(X)} is a member, its superset {ops.show(Z)} is not"
                break
        if witness:
            break
    out["P2"] = AxiomResult("P2", witness is None, checked, witness)

    checked, witness = 0, None
    for X in members:
        pts = ops.points(X, deletions)
        for r in range(1, len(pts) + 1):
            F = ops.finite(pts[:r])
            Z = ops.diff(X, F)
            checked += 1
            if not member(Z):
                witness = f"removing {', '.join(_show_point(p) for p in pts[:r])} from {ops.show(X)} leaves a non-member"
                break
        if witness:
            break
    out["P3"] = AxiomResult("P3", witness is None, checked, witness)

    found = next((X for X in members if ops.coinfinite(X)), None)
    out["P4"] = AxiomResult(
        "P4", found is not None, len(members), ops.show(found) if found is not None else "no co-infinite member among samples"
    )
    return out


def almost_cover_family(C: QSetExpr, universe: QSetExpr = FULL) -> Callable[[QSetExpr], bool]:
    """Membership in {B : universe minus C is almost contained in B}."""
    from .qset import almost_subset

    base = Diff(universe, C)
    return lambda B: almost_subset(base, B)
