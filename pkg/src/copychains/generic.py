"""A random partial order on Q built by a deterministic generic filter.

Conditions are finite strict orders on rationals that the rational order
extends.  A fixed task schedule alternates between "put q into the domain"
tasks and "meet the dense set for triple t with precision m" tasks; the
union of the resulting descending chain of conditions is the order.
"""

from __future__ import annotations

import itertools
import json
import threading
from bisect import bisect_right, insort
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from . import verdicts
from .order import FinPoset, Triple
from .qset import (
    NEG_INF,
    POS_INF,
    RATIONALS,
    Cut,
    DenseClass,
    Interval,
    QSetExpr,
    canonicalize,
    is_subset,
    max_of,
    member,
    min_height_rational,
    sup_of,
    witnesses,
)
from .qset.expr import Intersect


class ConditionError(ValueError):
    pass


# -- order state shared by conditions and the generic order -------------------


class _OrderState:
    """Mutable strict order on rationals with up/down sets kept transitively closed."""

    def __init__(self):
        self.points: Set[Fraction] = set()
        self.sorted: List[Fraction] = []
        self.intro: List[Fraction] = []
        self.up: Dict[Fraction, Set[Fraction]] = {}
        self.down: Dict[Fraction, Set[Fraction]] = {}

    @classmethod
    def from_pairs(cls, points: Iterable[Fraction], lt: Iterable[Tuple[Fraction, Fraction]]) -> "_OrderState":
        st = cls()
        for q in sorted(points):
            st.add_point(q)
        for a, b in lt:
            st.up[a].add(b)
            st.down[b].add(a)
        return st

    def add_point(self, q: Fraction) -> bool:
        if q in self.points:
            return False
        self.points.add(q)
        insort(self.sorted, q)
        self.intro.append(q)
        self.up[q] = set()
        self.down[q] = set()
        return True

    def add_related(self, q: Fraction, below: Set[Fraction], above: Set[Fraction]) -> None:
        self._audit_new(q, below, above)
        self.add_point(q)
        for x in below:
            self.up[x].add(q)
        for y in above:
            self.down[y].add(q)
        self.down[q] = set(below)
        self.up[q] = set(above)

    def _audit_new(self, q, below, above) -> None:
        # the closure formulas are checked, not trusted
        if q in self.points:
            raise ConditionError(f"fresh point {q} already present")
        for x in below:
            if not x < q:
                raise ConditionError(f"{x} placed below {q} against the rational order")
            if not self.down[x] <= below:
                raise ConditionError(f"below-set of {q} not down-closed at {x}")
        for y in above:
            if not q < y:
                raise ConditionError(f"{y} placed above {q} against the rational order")
            if not self.up[y] <= above:
                raise ConditionError(f"above-set of {q} not up-closed at {y}")
        for x in below:
            if not above <= self.up[x]:
                raise ConditionError(f"transitivity through {q} fails at {x}")

    def less(self, a, b) -> bool:
        return b in self.up[a]

    def incomparable(self, a, b) -> bool:
        return a != b and b not in self.up[a] and a not in self.up[b]

    def between(self, lo: Cut, hi: Cut) -> List[Fraction]:
        """Points strictly inside (lo, hi)."""
        i = 0 if lo == NEG_INF else bisect_right(self.sorted, _floor_key(lo))
        out = []
        for q in self.sorted[i:]:
            if not q < hi:
                break
            if lo < q:
                out.append(q)
        return out

    def consistent(self, t: Triple) -> bool:
        for l in t.L:
            for g in t.G:
                if not self.less(l, g):
                    return False
            for u in t.U:
                if self.less(u, l):
                    return False
        for g in t.G:
            for u in t.U:
                if self.less(g, u):
                    return False
        return True

    def realizes(self, t: Triple, p: Fraction) -> bool:
        if p in t.L or p in t.G or p in t.U:
            return False
        up, down = self.up[p], self.down[p]
        return (
            all(l in down for l in t.L)
            and all(g in up for g in t.G)
            and all(u not in up and u not in down for u in t.U)
        )

    def candidates(self, t: Triple, lo: Cut = NEG_INF, hi: Cut = POS_INF) -> Iterable[Fraction]:
        if t.L:
            pool = set.intersection(*(self.up[l] for l in t.L))
        elif t.G:
            pool = set.intersection(*(self.down[g] for g in t.G))
        else:
            return self.between(lo, hi)
        return sorted(q for q in pool if lo < q < hi)

    def realizer(self, t: Triple, lo: Cut = NEG_INF, hi: Cut = POS_INF, within: Optional[QSetExpr] = None,
                 avoid: FrozenSet = frozenset()) -> Optional[Fraction]:
        for p in self.candidates(t, lo, hi):
            if p in avoid or not self.realizes(t, p):
                continue
            if within is not None and not member(p, within):
                continue
            return p
        return None

    def pairs(self) -> List[Tuple[Fraction, Fraction]]:
        return sorted((a, b) for a in self.points for b in self.up[a])


def _floor_key(c: Cut) -> Fraction:
    # a rational <= c usable as a bisect key; exactness is restored by the scan
    if c.is_rational:
        return c.rational()
    return Fraction(c.floor_times(1))


# -- conditions ---------------------------------------------------------------


@dataclass(frozen=True)
class Condition:
    """A finite strict order on rationals that the rational order extends."""

    P: FrozenSet[Fraction] = frozenset()
    lt: FrozenSet[Tuple[Fraction, Fraction]] = frozenset()

    def __init__(self, P: Iterable = (), lt: Iterable = (), check: bool = True):
        object.__setattr__(self, "P", frozenset(Fraction(q) for q in P))
        object.__setattr__(self, "lt", frozenset((Fraction(a), Fraction(b)) for a, b in lt))
        if check:
            self.validate()

    def validate(self) -> None:
        for a, b in self.lt:
            if not a < b:
                raise ConditionError(f"pair ({a}, {b}) is not increasing in Q")
        self.to_poset()  # irreflexive, transitive, domain check

    def to_poset(self) -> FinPoset:
        return FinPoset(sorted(self.P), self.lt)

    def extends(self, other: "Condition") -> bool:
        """self <= other: larger domain, same order on the old domain."""
        if not self.P >= other.P:
            return False
        old = other.P
        return {(a, b) for a, b in self.lt if a in old and b in old} == set(other.lt)

    def state(self) -> _OrderState:
        return _OrderState.from_pairs(self.P, self.lt)

    @classmethod
    def from_state(cls, st: _OrderState, check: bool = False) -> "Condition":
        return cls(st.points, st.pairs(), check=check)

    def to_json(self) -> dict:
        return self.to_poset().to_json()

    @classmethod
    def from_json(cls, obj) -> "Condition":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(obj["elements"], [tuple(p) for p in obj["lt"]])


EMPTY_CONDITION = Condition()


def default_J(modulus: int = 8) -> DenseClass:
    return DenseClass(0, modulus)


def extend_with_point(p: Condition, q) -> Condition:
    q = Fraction(q)
    if q in p.P:
        return p
    return Condition(p.P | {q}, p.lt, check=False)


def _meet_plan(st: _OrderState, t: Triple, m: int, J: QSetExpr):
    """What to add so the state meets the dense set for (t, m); None if already met."""
    if not len(t):
        raise ConditionError("the empty triple indexes no dense set")
    if m < 1:
        raise ConditionError("precision m must be a positive integer")
    if not st.consistent(t):
        return None
    if t.G:
        lo = Cut.of(max(t.L)) if t.L else NEG_INF
        hi = Cut.of(min(t.G))
    else:
        top = t.m
        lo, hi = Cut.of(top), Cut.of(top + Fraction(1, m))
    if st.realizer(t, lo, hi, within=J) is not None:
        return None
    q = _fresh_in(J, lo, hi, st.points)
    below: Set[Fraction] = set(t.L)
    for l in t.L:
        below |= st.down[l]
    above: Set[Fraction] = set()
    if t.G:
        above = set(t.G)
        for g in t.G:
            above |= st.up[g]
    return q, below, above


def _fresh_in(J: QSetExpr, lo: Cut, hi: Cut, taken) -> Fraction:
    if isinstance(J, DenseClass):
        q = min_height_rational(lo, hi, frozenset((J.i,)), J.k, taken)
    else:
        q = next((w for w in witnesses(Intersect((J, Interval(lo, hi))), len(taken) + 1) if w not in taken), None)
    if q is None:
        raise ConditionError(f"no fresh point of J in ({lo}, {hi})")
    return q


def extend_meet_triple(p: Condition, t: Triple, m: int, J: Optional[QSetExpr] = None) -> Condition:
    J = default_J() if J is None else J
    st = p.state()
    for x in sorted(t.support):
        st.add_point(Fraction(x))
    t = Triple(map(Fraction, t.L), map(Fraction, t.G), map(Fraction, t.U))
    plan = _meet_plan(st, t, m, J)
    if plan is not None:
        st.add_related(*plan)
    return Condition.from_state(st)


# -- the schedule ---------------------------------------------------------------


def _split2(n: int) -> Tuple[int, int]:
    """n = 2**e * odd."""
    e = (n & -n).bit_length() - 1
    return e, n >> e


class _TripleCodes:
    """Triples over the height enumeration, by size: max index, then subset, then roles."""

    def __init__(self):
        self._lists: Dict[int, List[Tuple[Tuple[int, ...], Tuple[int, ...]]]] = {}
        self._gens: Dict[int, object] = {}
        self._lock = threading.Lock()

    @staticmethod
    def _gen(s: int):
        for top in itertools.count(s - 1):
            for rest in itertools.combinations(range(top), s - 1):
                support = rest + (top,)
                for roles in itertools.product(range(3), repeat=s):
                    yield support, roles

    def code(self, s: int, i: int):
        with self._lock:
            lst = self._lists.setdefault(s, [])
            gen = self._gens.setdefault(s, self._gen(s))
            while len(lst) <= i:
                lst.append(next(gen))
            return lst[i]

    def triple(self, s: int, i: int) -> Triple:
        support, roles = self.code(s, i)
        parts = ([], [], [])
        for idx, r in zip(support, roles):
            parts[r].append(RATIONALS[idx])
        return Triple(*parts)


TRIPLE_CODES = _TripleCodes()


@dataclass(frozen=True)
class PointTask:
    q: Fraction


@dataclass(frozen=True)
class TripleTask:
    size: int
    index: int
    m: int

    @property
    def triple(self) -> Triple:
        return TRIPLE_CODES.triple(self.size, self.index)


def task_at(n: int):
    """Task executed at step n (0-based)."""
    if n % 2 == 0:
        return PointTask(RATIONALS[n // 2])
    e, odd = _split2((n - 1) // 2 + 1)
    j = (odd - 1) // 2
    e2, odd2 = _split2(j + 1)
    return TripleTask(e2 + 1, (odd2 - 1) // 2, e + 1)


def step_of_point(q) -> int:
    return 2 * RATIONALS.index(q)


def step_of_triple(size: int, index: int, m: int) -> int:
    j = 2 ** (size - 1) * (2 * index + 1) - 1
    t = 2 ** (m - 1) * (2 * j + 1) - 1
    return 2 * t + 1


# -- the generic order -------------------------------------------------------------


class GenericOrder:
    """The order on Q decided by running the schedule step by step.

    Step advancement holds an exclusive lock; queries first advance as far as
    they need (under the lock), then read.  Answers never change once both
    points are in the domain.
    """

    def __init__(self, modulus: int = 8, j_class: int = 0, debug: bool = False):
        self.modulus = modulus
        self.J = DenseClass(j_class, modulus)
        self.debug = debug
        self.step = 0
        self._st = _OrderState()
        self._lock = threading.RLock()
        self._last: Optional[Condition] = EMPTY_CONDITION if debug else None

    # schedule ------------------------------------------------------------

    def advance(self, n: int = 1) -> List[Fraction]:
        """Run n more tasks; returns the points they introduced."""
        with self._lock:
            fresh: List[Fraction] = []
            for _ in range(n):
                fresh.extend(self._run(task_at(self.step)))
                self.step += 1
                if self.debug:
                    self._audit_step()
            return fresh

    def run_to(self, step: int) -> List[Fraction]:
        with self._lock:
            return self.advance(max(0, step - self.step))

    def _run(self, task) -> List[Fraction]:
        st = self._st
        if isinstance(task, PointTask):
            return [task.q] if st.add_point(task.q) else []
        t = task.triple
        fresh = [x for x in sorted(t.support) if st.add_point(x)]
        plan = _meet_plan(st, t, task.m, self.J)
        if plan is not None:
            st.add_related(*plan)
            fresh.append(plan[0])
        return fresh

    def _audit_step(self) -> None:
        cur = Condition.from_state(self._st, check=True)
        if not cur.extends(self._last):
            raise ConditionError(f"step {self.step}: condition does not extend its predecessor")
        self._last = cur

    # reading -------------------------------------------------------------

    def ensure(self, *qs) -> None:
        with self._lock:
            for q in qs:
                q = Fraction(q)
                while q not in self._st.points:
                    self.advance()

    def query(self, q1, q2) -> str:
        q1, q2 = Fraction(q1), Fraction(q2)
        if q1 == q2:
            return "equal"
        with self._lock:
            self.ensure(q1, q2)
            if self._st.less(q1, q2):
                return "below"
            if self._st.less(q2, q1):
                return "above"
            return "incomparable"

    def less(self, q1, q2) -> bool:
        return self.query(q1, q2) == "below"

    @property
    def points(self) -> FrozenSet[Fraction]:
        with self._lock:
            return frozenset(self._st.points)

    @property
    def introduced(self) -> Tuple[Fraction, ...]:
        with self._lock:
            return tuple(self._st.intro)

    def condition(self) -> Condition:
        with self._lock:
            return Condition.from_state(self._st)

    def restrict(self, points: Iterable) -> FinPoset:
        pts = sorted({Fraction(q) for q in points})
        with self._lock:
            self.ensure(*pts)
            keep = set(pts)
            lt = [(a, b) for a in pts for b in self._st.up[a] if b in keep]
        return FinPoset(pts, lt, check=False)

    def realizer(self, t: Triple, within: Optional[QSetExpr] = None, avoid: Iterable = ()) -> Optional[Fraction]:
        with self._lock:
            return self._st.realizer(t, within=within, avoid=frozenset(avoid))

    def consistent(self, t: Triple) -> bool:
        with self._lock:
            return self._st.consistent(t)

    # export --------------------------------------------------------------

    def config(self) -> dict:
        return {"modulus": self.modulus, "j_class": self.J.i}

    def schedule_state(self) -> dict:
        with self._lock:
            return {"step": self.step, "introduced_points": [str(q) for q in self._st.intro]}

    def replay_record(self) -> dict:
        return {"config": self.config(), "step": self.step}

    @classmethod
    def replay(cls, record) -> "GenericOrder":
        if isinstance(record, str):
            record = json.loads(record)
        g = cls(**record["config"])
        g.run_to(record["step"])
        return g


def generic_query(g: GenericOrder, q1, q2) -> str:
    return g.query(q1, q2)


# -- saturation --------------------------------------------------------------------


@dataclass
class SaturationReport:
    complete: bool
    steps: int
    budget: int
    triples: int
    realized: int
    inconsistent: int
    unrealized: List[Triple] = field(default_factory=list)
    realizers: Dict[Triple, Fraction] = field(default_factory=dict)

    @property
    def budget_exhausted(self) -> bool:
        return not self.complete

    def to_json(self) -> dict:
        return {
            "complete": self.complete,
            "steps": self.steps,
            "budget": self.budget,
            "triples": self.triples,
            "realized": self.realized,
            "inconsistent": self.inconsistent,
            "unrealized": [t.to_json() for t in self.unrealized],
        }


def _triples_over(points: Sequence[Fraction], k: int):
    from .order.triples import role_assignments

    for r in range(0, min(k, len(points)) + 1):
        for support in itertools.combinations(points, r):
            yield from role_assignments(support)


def saturate(
    g: GenericOrder,
    points: Iterable,
    k: int,
    budget: int,
    avoid: Iterable = (),
    within: Optional[QSetExpr] = None,
    full_poset: bool = True,
) -> Tuple[FinPoset, SaturationReport]:
    """Advance ``g`` until every triple of size <= k over ``points`` is settled.

    Settled means inconsistent in the decided order, or realized by a decided
    point outside ``avoid`` (and inside ``within`` when given).  ``budget``
    caps the total schedule step of ``g``; running out is reported, not
    raised.  The poset returned is the order on every introduced point (or
    only on ``points`` and the realizers found, with ``full_poset=False``).
    """
    pts = sorted({Fraction(q) for q in points})
    avoid_set = frozenset(Fraction(q) for q in avoid)
    with g._lock:
        while g.step < budget and not all(q in g._st.points for q in pts):
            g.advance()
        pending: List[Triple] = []
        found: Dict[Triple, Fraction] = {}
        inconsistent = 0
        total = 0
        ready = all(q in g._st.points for q in pts)
        if ready:
            for t in _triples_over(pts, k):
                total += 1
                if not g._st.consistent(t):
                    inconsistent += 1
                    continue
                r = g._st.realizer(t, within=within, avoid=avoid_set)
                if r is None:
                    pending.append(t)
                else:
                    found[t] = r
            while pending and g.step < budget:
                for q in g.advance():
                    still = []
                    for t in pending:
                        if q not in avoid_set and g._st.realizes(t, q) and (within is None or member(q, within)):
                            found[t] = q
                        else:
                            still.append(t)
                    pending = still
                    # relations among old points never change, so only new points can realize
        complete = ready and not pending
        report = SaturationReport(
            complete=complete,
            steps=g.step,
            budget=budget,
            triples=total,
            realized=len(found),
            inconsistent=inconsistent,
            unrealized=pending,
            realizers=found,
        )
        if full_poset:
            P = g.restrict(g._st.points)
        else:
            P = g.restrict(set(pts) | set(found.values()))
    return P, report


# -- copy-hood in the generic order -------------------------------------------------


def check_no_max_copy(E: QSetExpr) -> verdicts.Verdict:
    """A set with a rational maximum q fails the triple <{q}, {}, {}>."""
    c = canonicalize(E)
    if c.is_empty:
        return verdicts.not_copy("empty set")
    top = max_of(c)
    if top is not None:
        return verdicts.not_copy(f"maximum {top}: any realizer of <{{{top}}}, {{}}, {{}}> lies above it", Triple([top]))
    return verdicts.inconclusive("no maximum")


def is_copy_of_D(
    E: QSetExpr,
    k: int = 2,
    budget: int = 0,
    g: Optional[GenericOrder] = None,
    J: Optional[QSetExpr] = None,
    sample: int = 4,
) -> verdicts.Verdict:
    """Copy of the random order via the initial-segment sandwich, else evidence.

    Copy when J & (-inf, x) <= E <= (-inf, x) for x = sup E.  NotCopy when E
    has a maximum.  Otherwise a bounded realization run inside E on a small
    sample; that can only ever give Inconclusive.
    """
    if J is None:
        J = g.J if g is not None else default_J()
    obstruction = check_no_max_copy(E)
    if obstruction.is_not_copy:
        return obstruction
    x = sup_of(E)
    below = Interval(NEG_INF, x)
    if is_subset(E, below) and is_subset(Intersect((J, below)), E):
        return verdicts.copy(f"J below {x} <= E <= Q below {x}", x)
    if g is None or budget <= 0:
        return verdicts.inconclusive("outside the sandwich fragment; no saturation budget")
    pts = witnesses(E, sample)
    _, rep = saturate(g, pts, k, max(budget, g.step), within=E, full_poset=False)
    return verdicts.inconclusive(
        "outside the sandwich fragment; bounded realization inside E",
        None,
        sample=[str(q) for q in pts],
        triples=rep.triples,
        realized=rep.realized,
        inconsistent=rep.inconsistent,
        unrealized=len(rep.unrealized),
    )
