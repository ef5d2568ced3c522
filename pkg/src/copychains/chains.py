"""Maximal chains of copies, served lazily, and their symbolic verification.

A chain is indexed by pairs (x, j): x a cut in [-inf, inf], j a position in
the lump L_x (one position unless x is in M).  For Q-like structures

    A_x  = (J & (-inf, x)) u  U_{y in M, y < x} I_y
    A_x+ = A_x u I_x

with I_y a set of |L_y| - 1 points of J_y below y.  The lump at x in M walks
from A_x to A_x+ one point of I_x at a time.  C_omega uses (-inf, x) x omega+
in place of J & (-inf, x) and I_y x {0} in place of I_y.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from . import verdicts
from .catalogue import (
    OMEGA,
    OMEGA_PLUS,
    AmbientStructure,
    FiberSpec,
    ProductSetExpr,
    is_copy,
    normalize,
    product_diff,
    product_subset,
    product_union,
    supp,
)
from .qset import (
    EMPTY,
    FULL,
    NEG_INF,
    POS_INF,
    RATIONALS,
    CanonicalSet,
    Cut,
    DenseClass,
    FiniteSet,
    Interval,
    QSetExpr,
    canonicalize,
    max_of,
    parse_cut,
    sqrt2_plus,
    sup_of,
    witnesses,
)
from .qset.expr import Diff, Intersect, Union

Index = Tuple[Cut, int]

EQUAL = "Equal"
SINGLETON_GAP = "SingletonGapNonCopy"
LUMP_CUT = "LumpCut"

IN_CHAIN = "InChain"
INCOMPARABLE = "Incomparable"
NOT_A_COPY = "NotCopy"
POTENTIAL_INSERTION = "PotentialInsertion"


class ChainError(ValueError):
    pass


# -- linear order descriptions ------------------------------------------------------


@dataclass(frozen=True)
class LinOrderDesc:
    """L as a sum over x in [-inf, inf] of finite lumps L_x; M lists the big ones."""

    lumps: Tuple[Tuple[Cut, int], ...] = ()

    def __init__(self, lumps: "Dict[Any, int] | Iterable[Tuple[Any, int]]" = ()):
        items = lumps.items() if isinstance(lumps, dict) else lumps
        seen: Dict[Cut, int] = {}
        for x, s in items:
            c = Cut.of(x)
            if c == NEG_INF:
                raise ChainError("the lump at -inf is a singleton")
            if c in seen:
                raise ChainError(f"lump at {c} given twice")
            if int(s) < 2:
                raise ChainError(f"lump at {c} has size {s}; lumps in M have size >= 2")
            seen[c] = int(s)
        object.__setattr__(self, "lumps", tuple(sorted(seen.items())))

    @classmethod
    def parse(cls, text: str) -> "LinOrderDesc":
        """From "0:3,inf:2"; the empty string means M is empty."""
        pairs = []
        for part in filter(None, (p.strip() for p in text.split(","))):
            x, _, s = part.rpartition(":")
            if not x:
                raise ChainError(f"bad lump {part!r}; expected cut:size")
            pairs.append((parse_cut(x), int(s)))
        return cls(pairs)

    @property
    def M(self) -> Tuple[Cut, ...]:
        return tuple(x for x, _ in self.lumps)

    @property
    def infty_in_M(self) -> bool:
        return POS_INF in self.M

    def size(self, x: Cut) -> int:
        return dict(self.lumps).get(Cut.of(x), 1)

    def plus_one(self) -> "LinOrderDesc":
        """L + 1: one more element at the top."""
        rest = [(x, s) for x, s in self.lumps if x != POS_INF]
        return LinOrderDesc(rest + [(POS_INF, self.size(POS_INF) + 1)])

    def __str__(self):
        return ",".join(f"{x}:{s}" for x, s in self.lumps)


def case3_reindex(t) -> Fraction:
    """Increasing bijection (0, inf) -> R on rationals, t - 1/t."""
    t = Fraction(t)
    if t <= 0:
        raise ChainError("reindexing is defined on positive t")
    return t - 1 / t


# -- one-point-at-a-time interval chains -------------------------------------------


def _qset_points(E) -> Tuple[Fraction, ...]:
    c = canonicalize(E)
    if not c.is_finite:
        raise ChainError("set difference is infinite")
    return tuple(sorted(c.added))


def chain_interval(A: QSetExpr, B: QSetExpr, added: Sequence) -> List[CanonicalSet]:
    """[A, A u {a1}, A u {a1, a2}, ..., B], one point at a time."""
    pts = [Fraction(a) for a in added]
    if len(set(pts)) != len(pts):
        raise ChainError("added points repeat")
    A_c = canonicalize(A)
    if any(p in A_c for p in pts):
        raise ChainError("added points must lie outside A")
    gap = canonicalize(Diff(B, A))
    if not canonicalize(Diff(A, B)).is_empty or set(_qset_points(gap)) != set(pts):
        raise ChainError("B is not A plus exactly the added points")
    return [canonicalize(Union((A_c, FiniteSet(pts[:i])))) for i in range(len(pts) + 1)]


def cut_gaps(chain: Sequence[QSetExpr]) -> List[int]:
    """|inter B minus union A| over every proper cut of a finite increasing chain.

    A proper cut has both sides nonempty; -1 marks an infinite difference.
    """
    out = []
    for i in range(1, len(chain)):
        u = canonicalize(Union(tuple(chain[:i])))
        inter = canonicalize(Intersect(tuple(chain[i:])))
        d = canonicalize(Diff(inter, u))
        out.append(len(d.added) if d.is_finite else -1)
    return out


# -- set operations per structure -------------------------------------------------


def _universe(S: AmbientStructure) -> Optional[int]:
    return S.n if S.id in ("B_n", "C_n") else None


def _is_product(S: AmbientStructure) -> bool:
    return S.id in ("B_n", "C_n", "C_omega")


def set_subset(S: AmbientStructure, a, b) -> bool:
    if _is_product(S):
        return product_subset(a, b, _universe(S))
    return canonicalize(Diff(a, b)).is_empty


def set_equal(S: AmbientStructure, a, b) -> bool:
    return set_subset(S, a, b) and set_subset(S, b, a)


def set_union(S: AmbientStructure, a, b):
    if _is_product(S):
        return product_union(a, b, _universe(S))
    return canonicalize(Union((a, b)))


def set_diff(S: AmbientStructure, a, b):
    if _is_product(S):
        return product_diff(a, b, _universe(S))
    return canonicalize(Diff(a, b))


def set_is_empty(S: AmbientStructure, a) -> bool:
    if _is_product(S):
        return normalize(a, _universe(S)).components == ()
    return canonicalize(a).is_empty


def empty_set(S: AmbientStructure):
    return ProductSetExpr() if _is_product(S) else canonicalize(EMPTY)


def set_contains(S: AmbientStructure, a, point) -> bool:
    if _is_product(S):
        return a.contains(point, _universe(S))
    return Fraction(point) in a


def show_set(S: AmbientStructure, a) -> str:
    from .qset import to_sexpr

    if _is_product(S):
        comps = normalize(a, _universe(S)).components
        return " u ".join(f"{to_sexpr(canonicalize(E))} x {F}" for E, F in comps) or "(empty)"
    return to_sexpr(canonicalize(a))


# -- lazily served chains -----------------------------------------------------------


Q_LIKE = ("D", "Q", "B_omega")


@dataclass
class LazyChain:
    """A chain served index by index.

    ``base`` is the Q-like or C_omega chain carrying the closed forms;
    transported chains keep it and apply ``transform`` to every element.
    """

    structure: AmbientStructure
    desc: LinOrderDesc
    provenance: str
    modulus: int
    I: Dict[Cut, Tuple[Fraction, ...]]
    top_cut_size: int
    transform: Optional[Callable[[Any], Any]] = None
    base: Optional["LazyChain"] = None
    point_map: Optional[Callable[[Any], Any]] = None
    _cache: Dict[Index, Any] = field(default_factory=dict, repr=False)

    # index scheme ------------------------------------------------------------

    @property
    def J(self) -> QSetExpr:
        if self.structure.id == "D" and self.structure.generic is not None:
            return self.structure.generic.J
        return DenseClass(0, self.modulus)

    @property
    def root(self) -> "LazyChain":
        return self.base.root if self.base is not None else self

    def lump_size(self, x) -> int:
        x = Cut.of(x)
        if x == POS_INF:
            return self.top_cut_size
        return self.desc.size(x)

    def valid(self, index: Index) -> bool:
        x, j = index
        return 0 <= j < self.lump_size(x)

    def check_index(self, index) -> Index:
        x, j = index
        x = Cut.of(x)
        if not 0 <= j < self.lump_size(x):
            raise ChainError(f"index ({x}, {j}) outside the lump of size {self.lump_size(x)}")
        return (x, j)

    @property
    def top(self) -> Index:
        return (POS_INF, self.top_cut_size - 1)

    @property
    def bottom(self) -> Index:
        return (NEG_INF, 0)

    def lump(self, x) -> List[Index]:
        x = Cut.of(x)
        return [(x, j) for j in range(self.lump_size(x))]

    # elements ---------------------------------------------------------------

    def element(self, index) -> Any:
        index = self.check_index(index)
        if index not in self._cache:
            if self.base is not None:
                self._cache[index] = self.transform(self.base.element(index))
            else:
                self._cache[index] = self._build(index)
        return self._cache[index]

    def __getitem__(self, index):
        return self.element(index)

    def A(self, x):
        return self.root.element((Cut.of(x), 0)) if self.base is None else self.transform(self.root.A(x))

    def A_plus(self, x):
        x = Cut.of(x)
        if x not in self.root.I:
            raise ChainError(f"{x} is not in M")
        return self.element((x, self.lump_size(x) - 1))

    def _build(self, index: Index):
        x, j = index
        if x == NEG_INF:
            return empty_set(self.structure)
        extra = [p for y, pts in self.I.items() if y < x for p in pts]
        if x in self.I:
            extra += list(self.I[x][:j])
        if self.structure.id == "C_omega":
            comps = [(Interval(NEG_INF, x), OMEGA_PLUS)]
            if extra:
                comps.append((FiniteSet(extra), FiberSpec.finite([0])))
            return normalize(ProductSetExpr(comps))
        return canonicalize(Union((Intersect((self.J, Interval(NEG_INF, x))), FiniteSet(extra))))

    def is_copy(self, index) -> verdicts.Verdict:
        e = self.element(index)
        if set_is_empty(self.structure, e):
            return verdicts.not_copy("empty set")
        return is_copy(self.structure, e, **self._copy_opts())

    def _copy_opts(self) -> dict:
        return {"J": self.J} if self.structure.id == "D" else {}

    def copy_of(self, X) -> verdicts.Verdict:
        return is_copy(self.structure, X, **self._copy_opts())

    # order ------------------------------------------------------------------

    def compare(self, i1, i2) -> str:
        """"proper-subset", "proper-superset" or "equal", decided on the sets."""
        a, b = self.element(i1), self.element(i2)
        ab = set_subset(self.structure, a, b)
        ba = set_subset(self.structure, b, a)
        if ab and ba:
            return "equal"
        if ab:
            return "proper-subset"
        if ba:
            return "proper-superset"
        return "incomparable"

    def sample_indices(self, count: int) -> List[Index]:
        """A fixed spread of indices: lumps of M, then rationals and irrationals by height."""
        out = {self.bottom, self.top}
        for x in self.root.I:
            out.update(self.lump(x))
        i = 0
        while len(out) < count:
            q = RATIONALS[i]
            for c in (Cut.of(q), sqrt2_plus(q - 1)):
                if len(out) < count:
                    out.add((c, 0))
            i += 1
        return sorted(out)


def _choose_I(desc: LinOrderDesc, modulus: int) -> Dict[Cut, Tuple[Fraction, ...]]:
    if modulus < len(desc.M) + 1:
        raise ChainError(f"modulus {modulus} leaves no room for {len(desc.M)} lump classes")
    out = {}
    for pos, (y, s) in enumerate(desc.lumps):
        Jy = DenseClass(pos + 1, modulus)
        out[y] = tuple(sorted(witnesses(Jy, s - 1, NEG_INF, y)))
    return out


def choose_I(desc: LinOrderDesc, modulus: int = 8) -> Dict[Cut, Tuple[Fraction, ...]]:
    """I_y for y in M: the |L_y| - 1 lowest-height points of J_y below y."""
    return _choose_I(desc, modulus)


def _modulus_of(S: AmbientStructure, modulus: Optional[int]) -> int:
    if S.id == "D" and S.generic is not None:
        if modulus is not None and modulus != S.generic.modulus:
            raise ChainError("modulus differs from the generic order's")
        return S.generic.modulus
    return modulus or 8


def assemble_case1(S: AmbientStructure, desc: LinOrderDesc, modulus: Optional[int] = None) -> LazyChain:
    if S.id not in ("D", "Q", "C_omega"):
        raise ChainError(f"no direct construction on {S.name}")
    if not desc.infty_in_M:
        raise ChainError("Case I needs a lump of size >= 2 at inf")
    k = _modulus_of(S, modulus)
    return LazyChain(S, desc, "case I", k, _choose_I(desc, k), desc.size(POS_INF))


def assemble_case2(S: AmbientStructure, desc: LinOrderDesc, modulus: Optional[int] = None) -> LazyChain:
    """Case I for L + 1, minus its top element."""
    if desc.infty_in_M:
        raise ChainError("Case II needs a singleton lump at inf")
    if S.id not in ("D", "Q", "C_omega"):
        raise ChainError(f"no direct construction on {S.name}")
    k = _modulus_of(S, modulus)
    I = _choose_I(desc.plus_one(), k)
    # the lump at inf only produced the dropped top element
    del I[POS_INF]
    return LazyChain(S, desc, "case II", k, I, 1)


def assemble(S: AmbientStructure, desc: LinOrderDesc, modulus: Optional[int] = None) -> LazyChain:
    if S.id == "B_omega":
        return chain_B_omega(desc, modulus)
    if desc.infty_in_M:
        return assemble_case1(S, desc, modulus)
    return assemble_case2(S, desc, modulus)


def build_Ax(S: AmbientStructure, desc: LinOrderDesc, x, modulus: Optional[int] = None):
    return assemble(S, desc, modulus).A(x)


def build_Ax_plus(S: AmbientStructure, desc: LinOrderDesc, x, modulus: Optional[int] = None):
    return assemble(S, desc, modulus).A_plus(x)


def _transported(chain: LazyChain, S: AmbientStructure, f, provenance: str, point_map=None) -> LazyChain:
    return LazyChain(
        S, chain.desc, provenance, chain.modulus, chain.I, chain.top_cut_size,
        transform=f, base=chain, point_map=point_map or f,
    )


def lift_Bn(chain: LazyChain, n: int) -> LazyChain:
    """A -> {0} x A u {1..n-1} x Q on B_n; the empty set stays empty."""
    if chain.structure.id != "Q":
        raise ChainError("lift_Bn takes a chain over the rational line")
    from .catalogue import B

    rest = FiberSpec.finite(range(1, n))

    def f(A):
        if canonicalize(A).is_empty:
            return ProductSetExpr()
        return normalize(ProductSetExpr([(A, FiberSpec.finite([0])), (FULL, rest)]), n)

    def on_points(P):
        return ProductSetExpr([(P, FiberSpec.finite([0]))])

    return _transported(chain, B(n), f, f"{chain.provenance}, lifted to B_{n}", on_points)


def transport_Cn(chain: LazyChain, n: int) -> LazyChain:
    """A -> A x n."""
    if chain.structure.id != "Q":
        raise ChainError("transport_Cn takes a chain over the rational line")
    from .catalogue import C

    return _transported(
        chain, C(n), lambda A: normalize(ProductSetExpr.times_n(A, n), n), f"{chain.provenance}, A x {n}"
    )


def chain_B_omega(desc: LinOrderDesc, modulus: Optional[int] = None) -> LazyChain:
    """The rational-line chain read inside B_omega."""
    from .catalogue import B_omega, Q_line

    base = assemble(Q_line(), desc, modulus)
    return _transported(base, B_omega(), lambda A: A, f"{base.provenance}, read in B_omega")


# -- cut analysis -------------------------------------------------------------------


@dataclass
class CutReport:
    x0: Cut
    side: str
    row: Optional[int]
    unionA: Any
    interB: Any
    verdict: str
    gap: int
    witness: Any = None
    checks: Dict[str, bool] = field(default_factory=dict)

    def csv_row(self, S: AmbientStructure) -> List[str]:
        gap = "inf" if self.gap < 0 else str(self.gap)
        return [str(self.x0), self.side, "" if self.row is None else str(self.row), self.verdict, gap]


def _in_dense_part(chain: LazyChain, x0: Cut) -> bool:
    """Is x0 a point of the dense skeleton (J for Q-like, Q for C_omega)?"""
    if not x0.is_rational:
        return False
    if chain.root.structure.id == "C_omega":
        return True
    return x0.rational() in chain.root.J


def _gap_piece(root: LazyChain, x0: Cut):
    if root.structure.id == "C_omega":
        return ProductSetExpr.times(FiniteSet([x0.rational()]), OMEGA_PLUS)
    return canonicalize(FiniteSet([x0.rational()]))


def point_piece(chain: LazyChain, p):
    """The points over rational p that a cut at p can add, in the chain's structure."""
    piece = _gap_piece(chain.root, Cut.of(p))
    node = chain
    maps = []
    while node.base is not None:
        maps.append(node.point_map)
        node = node.base
    for f in reversed(maps):
        piece = f(piece)
    return piece


def _approach(x0: Cut, sign: int, count: int = 6) -> List[Cut]:
    """Irrational cuts tending to x0 from one side."""
    if x0 == POS_INF:
        return [sqrt2_plus(2 ** k) for k in range(count)]
    if x0 == NEG_INF:
        return [sqrt2_plus(-(2 ** k)) for k in range(count)]
    # x0 + sign * sqrt2 / 2^k, written as a + b sqrt2, skipping any that land on Q
    out = []
    k = 0
    while len(out) < count:
        c = Cut.quadratic(x0.a, x0.b + Fraction(sign, 2 ** k))
        if not c.is_rational:
            out.append(c)
        k += 1
    return out


def _cut_between(root: LazyChain, lo: Cut, hi: Cut):
    """Points of the root structure strictly between two cuts, as a set."""
    if root.structure.id == "C_omega":
        return ProductSetExpr.times(Interval(lo, hi), OMEGA)
    return canonicalize(Interval(lo, hi))


def _root_cut(root: LazyChain, x0: Cut, side) -> CutReport:
    S = root.structure
    in_M = x0 in root.I
    size = root.lump_size(x0)
    if isinstance(side, tuple) and side[0] == "lump":
        j = side[1]
        if not in_M or not 1 <= j < size:
            raise ChainError(f"no lump position {j} at {x0}")
        lo, hi = root.element((x0, j - 1)), root.element((x0, j))
        return CutReport(x0, f"lump:{j}", None, lo, hi, LUMP_CUT, 1)

    if side == "max_A":
        if x0 == POS_INF:
            raise ChainError("nothing lies above the top lump")
        unionA = root.element((x0, size - 1))
        row = 1 + int(_in_dense_part(root, x0)) + 2 * int(in_M)
        interB = unionA
        if _in_dense_part(root, x0):
            interB = set_union(S, unionA, _gap_piece(root, x0))
        # interB is the limit of elements above x0: check it is below each and
        # that what each adds lies in (x0, x) only
        ok_below = ok_tail = True
        for x in _approach(x0, +1):
            if any(x0 < y <= x for y in root.I):
                continue
            e = root.element((x, 0))
            ok_below &= set_subset(S, interB, e)
            ok_tail &= set_subset(S, set_diff(S, e, interB), _cut_between(root, x0, x))
        checks = {"closed_form_below_B": ok_below, "B_collapses_to_closed_form": ok_tail}
    elif side == "min_B":
        if x0 == NEG_INF:
            raise ChainError("nothing lies below the bottom")
        interB = root.element((x0, 0))
        row = 1 + int(_in_dense_part(root, x0)) + 2 * int(in_M)
        unionA = interB
        ok_above = ok_tail = True
        for x in _approach(x0, -1):
            if any(x < y < x0 for y in root.I):
                continue
            e = root.element((x, root.lump_size(x) - 1))
            ok_above &= set_subset(S, e, unionA)
            ok_tail &= set_subset(S, set_diff(S, unionA, e), _cut_between(root, x, x0))
        checks = {"A_below_closed_form": ok_above, "A_exhausts_closed_form": ok_tail}
    else:
        raise ChainError(f"unknown side {side!r}")

    gap_set = set_diff(S, interB, unionA)
    if set_is_empty(S, gap_set):
        return CutReport(x0, side, row, unionA, interB, EQUAL, 0, None, checks)
    # every set strictly between adds points over x0 only, and then x0 is a maximum
    v = root.copy_of(interB)
    top = max_of(supp(interB)) if root.structure.id == "C_omega" else max_of(interB)
    checks["maximum_is_x0"] = top is not None and Cut.of(top) == x0
    checks["interB_not_copy"] = v.is_not_copy
    # -1 marks an infinite gap ({x0} x omega+)
    gap = -1 if root.structure.id == "C_omega" else len(canonicalize(gap_set).added)
    return CutReport(x0, side, row, unionA, interB, SINGLETON_GAP, gap, top, checks)


def cut_analysis(chain: LazyChain, x0, side="max_A") -> CutReport:
    """Closed forms of the union below and intersection above a cut at x0.

    ``side`` is "max_A" (x0's lump lies below the cut), "min_B" (it lies
    above) or ("lump", j) (the cut sits inside the lump, before position j).
    Transported chains map the closed forms and re-judge copy-hood.
    """
    x0 = Cut.of(x0)
    if chain.base is None:
        return _root_cut(chain, x0, side)
    rep = cut_analysis(chain.base, x0, side)
    f = chain.transform
    uA, iB = f(rep.unionA), f(rep.interB)
    verdict = rep.verdict
    checks = dict(rep.checks)
    if verdict == SINGLETON_GAP:
        checks["interB_not_copy"] = chain.copy_of(iB).is_not_copy
    elif verdict == EQUAL:
        checks["transport_equal"] = set_equal(chain.structure, uA, iB)
    return CutReport(rep.x0, rep.side, rep.row, uA, iB, verdict, rep.gap, rep.witness, checks)


def closed_form(chain: LazyChain, x0, row: int):
    """The closed form of the intersection above x0 for a table row."""
    x0 = Cut.of(x0)
    root = chain.root
    base = root.A_plus(x0) if row in (3, 4) else root.A(x0)
    if row in (2, 4):
        base = set_union(root.structure, base, _gap_piece(root, x0))
    return base


# -- embedding into the reals ------------------------------------------------------


@dataclass
class EmbeddingReport:
    values: List[Fraction]
    strictly_increasing: bool
    first_collision: Optional[Tuple[int, int]]
    distinct: int


def enumeration_of(S: AmbientStructure, top, count: int) -> list:
    """The first ``count`` points of ``top`` in the fixed enumeration of the universe."""
    out = []
    i = 0
    width = S.n if S.id in ("B_n", "C_n") else 2
    while len(out) < count and i < 50 * count + 1000:
        q = RATIONALS[i]
        if _is_product(S):
            for f in range(width):
                pt = (q, f)
                if len(out) < count and set_contains(S, top, pt):
                    out.append(pt)
        elif q in top:
            out.append(q)
        i += 1
    return out


def separating_enumeration(S: AmbientStructure, elements: Sequence, top, count: int) -> list:
    """An enumeration of ``top`` that lists one point of each consecutive difference first.

    Any enumeration of the top set serves the embedding; putting separating
    points first makes the truncation separate as many neighbours as it can.
    """
    head = []
    for a, b in zip(elements, elements[1:]):
        d = set_diff(S, b, a)
        if set_is_empty(S, d):
            continue
        pt = _some_point(S, d)
        if pt not in head:
            head.append(pt)
    rest = [p for p in enumeration_of(S, top, count + len(head)) if p not in head]
    return (head + rest)[:count]


def _some_point(S: AmbientStructure, X):
    from .qset import witness_in

    if _is_product(S):
        a = X.atoms(_universe(S))
        for i in a.keys:
            q = witness_in(a.at(i))
            if q is not None:
                return (q, i)
        return (witness_in(a.rest), max(a.keys, default=-1) + 1)
    return witness_in(X)


def r_embedding(S: AmbientStructure, elements: Sequence, enumeration: Sequence, bits: int) -> EmbeddingReport:
    """f(A) = sum over n < bits of 2^-n [x_n in A]."""
    for a, b in zip(elements, elements[1:]):
        if not (set_subset(S, a, b) or set_subset(S, b, a)):
            raise ChainError("elements are not a chain")
    pts = list(enumeration)[:bits]
    vals = [sum((Fraction(1, 2 ** n) for n, x in enumerate(pts) if set_contains(S, A, x)), Fraction(0)) for A in elements]
    collision = None
    for i, (u, v) in enumerate(zip(vals, vals[1:])):
        if not u < v:
            collision = (i, i + 1)
            break
    return EmbeddingReport(vals, collision is None, collision, len(set(vals)))


# -- maximality probes -------------------------------------------------------------


@dataclass
class ProbeResult:
    outcome: str
    reason: str
    index: Optional[Index] = None


def _trace(S: AmbientStructure, C) -> CanonicalSet:
    """The rationals that locate C in the chain: line 0 for B_n, else the support."""
    if S.id == "B_n":
        return C.atoms(S.n).at(0)
    if _is_product(S):
        return supp(C, _universe(S))
    return canonicalize(C)


def _probe_indices(chain: LazyChain, C, samples: Sequence[Index]) -> List[Index]:
    base = _trace(chain.structure, C)
    extra = set(samples)
    marks = list(base.breakpoints()) + [Cut.of(p) for p in base.added] + [Cut.of(p) for p in base.removed]
    s = sup_of(base)
    if s is not None:
        marks.append(s)
    finite = sorted({m for m in marks if m.is_finite})
    marks += [Cut.quadratic((u.a + v.a) / 2, (u.b + v.b) / 2) for u, v in zip(finite, finite[1:])]
    for m in marks:
        if m.is_finite:
            for c in _approach(m, -1, 3) + _approach(m, +1, 3) + [m]:
                extra.update(chain.lump(c))
    extra.update(chain.lump(POS_INF))
    extra.add(chain.bottom)
    return sorted(extra)


def maximality_probe(chain: LazyChain, C, samples: Sequence[Index] = ()) -> ProbeResult:
    """Does C fit strictly inside a gap of the chain?  Anything else upholds maximality."""
    S = chain.structure
    idx = _probe_indices(chain, C, samples)
    below, above = [], []
    for i in idx:
        e = chain.element(i)
        sub = set_subset(S, e, C)
        sup = set_subset(S, C, e)
        if sub and sup:
            return ProbeResult(IN_CHAIN, "equals a chain element", i)
        if not sub and not sup:
            return ProbeResult(INCOMPARABLE, "incomparable with a chain element", i)
        (below if sub else above).append(i)
    v = chain.copy_of(C) if not set_is_empty(S, C) else verdicts.not_copy("empty set")
    if v.is_not_copy:
        return ProbeResult(NOT_A_COPY, v.reason)
    # C sits between the largest element below and the smallest above
    lo, hi = below[-1], above[0]
    if lo[0] == hi[0]:
        candidates = [(hi[0], ("lump", hi[1]))]
    else:
        candidates = [(lo[0], "max_A"), (hi[0], "min_B")]
    for x, side in candidates:
        try:
            rep = cut_analysis(chain, x, side)
        except ChainError:
            continue
        if set_equal(S, C, rep.unionA) or set_equal(S, C, rep.interB):
            return ProbeResult(IN_CHAIN, f"equals a closed form at {rep.x0} ({rep.side})")
        if set_subset(S, rep.unionA, C) and set_subset(S, C, rep.interB) and rep.verdict != EQUAL:
            # strictly inside a gap: only a non-copy can live there
            if rep.verdict == SINGLETON_GAP:
                return ProbeResult(NOT_A_COPY, f"inside the gap at {rep.x0}; the upper set has maximum {rep.witness}")
    return ProbeResult(POTENTIAL_INSERTION, f"between {lo} and {hi} with verdict {v.kind}")


def probe_family(chain: LazyChain, grid: Sequence[Cut], sample_count: int = 12) -> List[Tuple[str, ProbeResult]]:
    """Standard probes around each grid point: elements, gap fillers, added and removed points."""
    S = chain.structure
    J = chain.root.J
    samples = chain.sample_indices(sample_count)
    out = []
    for x0 in grid:
        x0 = Cut.of(x0)
        for i in chain.lump(x0):
            out.append((f"element {i[0]}:{i[1]}", maximality_probe(chain, chain.element(i), samples)))
        A = chain.element((x0, chain.lump_size(x0) - 1))
        if x0.is_rational:
            out.append((f"A_{x0} u gap", maximality_probe(chain, set_union(S, A, point_piece(chain, x0)), samples)))
        lo = x0 if x0.is_finite else NEG_INF
        hi = x0 + 3 if x0.is_finite else POS_INF
        for p in witnesses(J, 2, lo, hi):
            out.append((f"A_{x0} u {{{p}}}", maximality_probe(chain, set_union(S, A, point_piece(chain, p)), samples)))
        if x0.is_finite:
            for p in witnesses(J, 1, NEG_INF, x0):
                out.append((f"A_{x0} minus {{{p}}}", maximality_probe(chain, set_diff(S, A, point_piece(chain, p)), samples)))
    return out


# -- unions of chains of copies -----------------------------------------------------


def union_of_chain_is_copy(S: AmbientStructure, elements: Sequence, **opts) -> verdicts.Verdict:
    if not elements:
        raise ChainError("empty chain")
    for a, b in zip(elements, elements[1:]):
        if not set_subset(S, a, b):
            raise ChainError("elements must be listed in increasing order")
    for e in elements:
        v = is_copy(S, e, **opts)
        if not v.is_copy:
            raise ChainError(f"element is not a copy: {v.reason}")
    u = elements[0]
    for e in elements[1:]:
        u = set_union(S, u, e)
    v = is_copy(S, u, **opts)
    return verdicts.Verdict(v.kind, v.reason, v.witness, {"union": show_set(S, u)})


def intersection_shrinks(chain: LazyChain, depth: int = 6) -> bool:
    """The nonempty elements A_x for x -> -inf have empty intersection.

    Each A_x lies below x, so the intersection over x_k = sqrt2 - 2^k
    is contained in every (-inf, x_k) and is empty.
    """
    S = chain.root.structure
    for x in _approach(NEG_INF, -1, depth):
        e = chain.root.element((x, 0))
        if not set_subset(S, e, _cut_between(chain.root, NEG_INF, x)):
            return False
    return True
