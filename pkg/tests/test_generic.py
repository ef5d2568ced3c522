import itertools
import threading
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from copychains.generic import (
    Condition,
    ConditionError,
    EMPTY_CONDITION,
    GenericOrder,
    PointTask,
    TripleTask,
    check_no_max_copy,
    extend_meet_triple,
    extend_with_point,
    generic_query,
    is_copy_of_D,
    saturate,
    step_of_point,
    step_of_triple,
    task_at,
)
from copychains.order import FinPoset, Triple, is_random_up_to
from copychains.qset import (
    NEG_INF,
    RATIONALS,
    DenseClass,
    Diff,
    FiniteSet,
    Interval,
    Intersect,
    Union,
    member,
    sqrt2_plus,
)

J = DenseClass(0)


@pytest.fixture(scope="module")
def g():
    order = GenericOrder()
    order.run_to(3000)
    return order


# -- conditions -----------------------------------------------------------------------


def test_condition_rejects_order_against_the_rationals():
    with pytest.raises(Exception):
        Condition([0, 1], [(F(1), F(0))])
    c = Condition([0, 1], [(F(0), F(1))])
    assert c.to_poset().less(F(0), F(1))
    assert Condition.from_json(c.to_json()) == c


def test_extend_with_point_examples():
    p = extend_with_point(EMPTY_CONDITION, 0)
    assert p.P == {F(0)} and not p.lt
    assert extend_with_point(p, 0) is p
    base = Condition([0, 1], [(F(0), F(1))])
    q = extend_with_point(base, F(1, 2))
    assert q.P == {F(0), F(1, 2), F(1)} and q.lt == base.lt
    assert q.extends(base)


def test_meet_triple_between_points():
    p = Condition([0, 1], [(F(0), F(1))])
    r = extend_meet_triple(p, Triple([F(0)], [F(1)], []), 1)
    (new,) = r.P - p.P
    assert 0 < new < 1 and member(new, J)
    P = r.to_poset()
    assert P.less(F(0), new) and P.less(new, F(1))
    assert r.extends(p)


def test_meet_triple_above_top():
    p = Condition([0], [])
    r = extend_meet_triple(p, Triple([F(0)], [], []), 2)
    (new,) = r.P - p.P
    assert 0 < new < F(1, 2) and member(new, J)
    # the window sits above the largest support point, incomparables included
    p = Condition([0, 1], [])
    r = extend_meet_triple(p, Triple([F(0)], [], [F(1)]), 2)
    (new,) = r.P - p.P
    assert 1 < new < F(3, 2) and member(new, J)
    P = r.to_poset()
    assert P.less(F(0), new) and not P.less(new, F(1)) and not P.less(F(1), new)


def test_meet_triple_inconsistent_adds_only_points():
    p = Condition([0, 1], [(F(0), F(1))])
    r = extend_meet_triple(p, Triple([F(1)], [], [F(0)]), 1)
    assert r == p
    with pytest.raises(ConditionError):
        extend_meet_triple(p, Triple([F(0)], [], []), 0)


@given(st.integers(0, 10**6))
@settings(max_examples=40)
def test_meet_triple_results_extend_and_realize(seed):
    import random

    rng = random.Random(seed)
    pts = sorted({F(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(4)})
    lt = [(a, b) for a, b in itertools.combinations(pts, 2) if rng.random() < 0.4]
    p = Condition.from_state(Condition(pts, FinPoset.generate(pts, lt).lt).state())
    support = rng.sample(pts, min(len(pts), rng.randint(1, 3)))
    roles = [rng.randrange(3) for _ in support]
    t = Triple(*[[x for x, r in zip(support, roles) if r == k] for k in range(3)])
    r = extend_meet_triple(p, t, rng.randint(1, 4))
    assert r.extends(p)
    P = r.to_poset()
    assert all(a < b for a, b in P.lt)
    if t.consistent_with(p.to_poset()):
        assert any(t.realized_by(P, x) for x in r.P - t.support)


# -- schedule -----------------------------------------------------------------------


def test_schedule_positions():
    assert task_at(0) == PointTask(RATIONALS[0])
    assert step_of_point(F(3, 2)) == 34
    assert step_of_triple(2, 251, 1) == 4021
    for n in range(1, 2000, 2):
        t = task_at(n)
        assert isinstance(t, TripleTask)
        assert step_of_triple(t.size, t.index, t.m) == n
    for n in range(0, 200, 2):
        assert step_of_point(task_at(n).q) == n


def test_schedule_covers_prescribed_tasks():
    wanted = [(1, 0, 1), (1, 3, 2), (2, 5, 1), (3, 0, 3)]
    seen = {(t.size, t.index, t.m) for t in map(task_at, range(1, 20000, 2))}
    assert set(wanted) <= seen


# -- the generic order ---------------------------------------------------------------


def test_query_examples(g):
    assert generic_query(g, F(1, 3), F(1, 3)) == "equal"
    for a, b in itertools.combinations(sorted(g.points)[:60], 2):
        ans = g.query(a, b)
        if ans == "below":
            assert a < b
        assert ans != "above"


def test_queries_form_a_strict_order(g):
    pts = [RATIONALS[i] for i in range(12)]
    P = g.restrict(pts)
    for a, b, c in itertools.permutations(pts, 3):
        if P.less(a, b) and P.less(b, c):
            assert P.less(a, c)
    assert not any(P.less(a, a) for a in pts)


def test_non_J_points_are_pairwise_incomparable(g):
    off = [q for q in sorted(g.points) if not member(q, J)][:80]
    assert all(g.query(a, b) == "incomparable" for a, b in itertools.combinations(off, 2))


def test_coherence_across_steps():
    h = GenericOrder()
    h.run_to(400)
    pts = sorted(h.points)
    before = {(a, b): h.query(a, b) for a, b in itertools.combinations(pts, 2)}
    h.run_to(2500)
    assert all(h.query(a, b) == v for (a, b), v in before.items())


def test_debug_audit_runs():
    h = GenericOrder(debug=True)
    h.run_to(300)
    assert h.step == 300


def test_determinism_regardless_of_interleaving():
    pts = [RATIONALS[i] for i in range(30)]
    a, b = GenericOrder(), GenericOrder()
    ans_a = {(x, y): a.query(x, y) for x, y in itertools.combinations(pts, 2)}
    b.run_to(1500)
    ans_b = {(x, y): b.query(x, y) for x, y in reversed(list(itertools.combinations(pts, 2)))}
    assert ans_a == ans_b


def test_threads_share_one_schedule():
    h = GenericOrder()
    pts = [RATIONALS[i] for i in range(40)]
    out = {}

    def work(k):
        out[k] = [h.query(x, y) for x, y in itertools.combinations(pts[k::2], 2)]

    ts = [threading.Thread(target=work, args=(k,)) for k in range(2)]
    for t in ts:
        t.start()
    for t in ts:
        t.join()
    ref = GenericOrder()
    for k in range(2):
        assert out[k] == [ref.query(x, y) for x, y in itertools.combinations(pts[k::2], 2)]


def test_replay_reconstructs_state():
    h = GenericOrder()
    h.run_to(700)
    again = GenericOrder.replay(h.replay_record())
    assert again.condition() == h.condition()
    assert again.schedule_state() == h.schedule_state()


# -- saturation ---------------------------------------------------------------------


def test_saturate_two_point_core():
    h = GenericOrder()
    P, rep = saturate(h, [0, 1], 2, 5000)
    assert rep.complete and rep.realized + rep.inconsistent == rep.triples
    assert is_random_up_to(P, 2, core=[F(0), F(1)])[0]
    core = [F(0), F(1)]
    for t, r in rep.realizers.items():
        assert t.realized_by(P, r) and r not in core


def test_saturate_empty_core():
    _, rep = saturate(GenericOrder(), [], 2, 10)
    assert rep.complete and rep.triples == 1


def test_top_triple_realized_just_above():
    h = GenericOrder()
    _, rep = saturate(h, [0], 1, 5000)
    r = rep.realizers[Triple([F(0)], [], [])]
    assert r > 0


def test_saturation_after_removing_finitely_many_points():
    h = GenericOrder()
    core = [RATIONALS[i] for i in range(4)]
    _, first = saturate(h, core, 2, 5000)
    avoid = set(first.realizers.values())
    _, rep = saturate(h, core, 2, 20000, avoid=avoid)
    assert rep.complete
    assert not avoid & set(rep.realizers.values())


# -- copies of D --------------------------------------------------------------------


def test_check_no_max_copy_examples():
    v = check_no_max_copy(Union((Interval(NEG_INF, 0), FiniteSet([0]))))
    assert v.is_not_copy and v.witness == Triple([F(0)])
    assert check_no_max_copy(Interval(NEG_INF, 0)).kind == "Inconclusive"
    assert check_no_max_copy(FiniteSet([1, 2])).is_not_copy


def test_is_copy_of_D_examples():
    x = sqrt2_plus(-1)
    assert is_copy_of_D(Intersect((J, Interval(NEG_INF, x)))).is_copy
    A = Union((Intersect((J, Interval(NEG_INF, 0))), Intersect((DenseClass(1), Interval(NEG_INF, -1)))))
    assert is_copy_of_D(Diff(Union((A, FiniteSet([F(-1, 3)]))), FiniteSet([F(-7)]))).is_copy
    assert is_copy_of_D(FiniteSet([1])).is_not_copy
    v = is_copy_of_D(DenseClass(1), budget=0)
    assert v.kind == "Inconclusive"
