import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from copychains import catalogue as cat
from copychains.catalogue import FiberSpec, ProductSetExpr, is_copy, product_equal
from copychains.chains import (
    EQUAL,
    IN_CHAIN,
    INCOMPARABLE,
    LUMP_CUT,
    NOT_A_COPY,
    POTENTIAL_INSERTION,
    SINGLETON_GAP,
    ChainError,
    LinOrderDesc,
    assemble,
    assemble_case1,
    assemble_case2,
    build_Ax,
    build_Ax_plus,
    case3_reindex,
    chain_B_omega,
    chain_interval,
    choose_I,
    closed_form,
    cut_analysis,
    cut_gaps,
    enumeration_of,
    intersection_shrinks,
    lift_Bn,
    maximality_probe,
    probe_family,
    r_embedding,
    transport_Cn,
    union_of_chain_is_copy,
)
from copychains.qset import (
    EMPTY,
    FULL,
    NEG_INF,
    POS_INF,
    RATIONALS,
    Cut,
    DenseClass,
    Diff,
    FiniteSet,
    Intersect,
    Interval,
    Union,
    canonicalize,
    equivalent,
    is_finite_expr,
    is_subset,
    member,
    parse_sexpr,
    sqrt2_plus,
)

J = DenseClass(0)


@pytest.fixture(scope="module")
def d_chain():
    return assemble(cat.D(), LinOrderDesc.parse("0:3,inf:2"))


@pytest.fixture(scope="module")
def w_chain():
    return assemble(cat.C_omega(), LinOrderDesc.parse("0:2,sqrt2-1:2,inf:2"))


# -- descriptions -------------------------------------------------------------------


def test_desc_parsing_and_validation():
    d = LinOrderDesc.parse("0:3,inf:2")
    assert d.M == (Cut.of(0), POS_INF) and d.infty_in_M and d.size(Cut.of(0)) == 3 and d.size(Cut.of(5)) == 1
    assert str(LinOrderDesc.parse(str(d))) == str(d)
    assert LinOrderDesc.parse("").M == ()
    assert LinOrderDesc.parse("0:3").plus_one().size(POS_INF) == 2
    for bad in ("-inf:2", "0:1", "0:2,0:3", "3"):
        with pytest.raises(ChainError):
            LinOrderDesc.parse(bad)


def test_case3_reindex_is_increasing_onto_both_sides():
    ts = sorted({F(a, b) for a in range(1, 30) for b in range(1, 8)})
    vals = [case3_reindex(t) for t in ts]
    assert vals == sorted(vals) and len(set(vals)) == len(vals)
    assert case3_reindex(1) == 0 and case3_reindex(F(1, 100)) < -99 and case3_reindex(100) > 99
    with pytest.raises(ChainError):
        case3_reindex(0)


# -- interval chains ------------------------------------------------------------------


def test_chain_interval_examples():
    A = Interval(NEG_INF, 0)
    ch = chain_interval(A, Union((A, FiniteSet([1, 2]))), [1, 2])
    assert len(ch) == 3
    assert equivalent(ch[1], Union((A, FiniteSet([1]))))
    assert chain_interval(A, A, []) == [canonicalize(A)]
    with pytest.raises(ChainError):
        chain_interval(A, Union((A, FiniteSet([1, 2]))), [1])


@given(st.integers(0, 6), st.sampled_from([EMPTY, J, Interval(NEG_INF, sqrt2_plus(-3))]))
@settings(max_examples=40)
def test_interval_chain_cuts_have_small_gaps(n, A):
    pts = [F(10 + k, 3) for k in range(n)]
    ch = chain_interval(A, Union((A, FiniteSet(pts))), pts)
    assert len(ch) == n + 1
    gaps = cut_gaps(ch)
    assert len(gaps) == n and all(0 <= g <= 1 for g in gaps)


# -- the A_x family -------------------------------------------------------------------


def test_I_choice_is_deterministic_and_in_class():
    desc = LinOrderDesc.parse("0:3,inf:2")
    I = choose_I(desc)
    assert I == choose_I(desc)
    for pos, (y, s) in enumerate(desc.lumps):
        assert len(I[y]) == s - 1
        assert all(member(p, DenseClass(pos + 1)) and Cut.of(p) < y for p in I[y])
    with pytest.raises(ChainError):
        choose_I(LinOrderDesc.parse("0:2,1:2,2:2"), 3)


def test_build_Ax_examples():
    desc = LinOrderDesc.parse("0:3,inf:2")
    assert canonicalize(build_Ax(cat.D(), desc, NEG_INF)).is_empty
    for x in (F(-1), F(0), F(1, 2), sqrt2_plus(0), POS_INF):
        assert is_subset(build_Ax(cat.D(), desc, x), Interval(NEG_INF, x))
    for x, s in desc.lumps:
        fin, size = is_finite_expr(Diff(build_Ax_plus(cat.D(), desc, x), build_Ax(cat.D(), desc, x)))
        assert fin and size == s - 1
    with pytest.raises(ChainError):
        build_Ax_plus(cat.D(), desc, F(1))


def test_case1_top_lump():
    ch = assemble_case1(cat.D(), LinOrderDesc.parse("inf:2"))
    assert ch.top == (POS_INF, 1)
    assert equivalent(ch[(POS_INF, 0)], J)
    assert ch.compare((POS_INF, 0), (POS_INF, 1)) == "proper-subset"
    assert canonicalize(ch[ch.bottom]).is_empty
    with pytest.raises(ChainError):
        assemble_case1(cat.D(), LinOrderDesc.parse("0:2"))


def test_case2_drops_the_top_of_L_plus_one():
    desc = LinOrderDesc.parse("0:3")
    ch = assemble_case2(cat.D(), desc)
    big = assemble_case1(cat.D(), desc.plus_one())
    assert big.top == (POS_INF, 1) and ch.top == (POS_INF, 0)
    assert equivalent(ch[ch.top], big[(POS_INF, 0)])
    assert canonicalize(ch[ch.bottom]).is_empty
    with pytest.raises(ChainError):
        assemble_case2(cat.D(), LinOrderDesc.parse("inf:2"))


@pytest.mark.parametrize(
    "S,desc",
    [(cat.D(), "0:3"), (cat.D(), "0:3,inf:2"), (cat.Q_line(), ""), (cat.C_omega(), "0:2,inf:3")],
)
def test_served_chain_is_ordered_like_its_indices(S, desc):
    ch = assemble(S, LinOrderDesc.parse(desc))
    idx = ch.sample_indices(50)
    for a, b in itertools.combinations(idx, 2):
        assert ch.compare(a, b) == ("proper-subset" if a < b else "proper-superset")
    for i in idx:
        if i != ch.bottom:
            assert ch.is_copy(i).is_copy, i


def test_lump_cuts_have_small_gaps(d_chain):
    lump = [d_chain[i] for i in d_chain.lump(Cut.of(0))]
    assert all(0 <= g <= 1 for g in cut_gaps(lump))


# -- transports -----------------------------------------------------------------------


def test_lift_Bn():
    base = assemble(cat.Q_line(), LinOrderDesc.parse("0:2,inf:2"))
    ch = lift_Bn(base, 3)
    assert product_equal(ch.transform(FULL), ProductSetExpr.times(FULL, FiberSpec.finite(range(3))), 3)
    assert ch[ch.bottom].components == ()
    idx = ch.sample_indices(20)
    for a, b in itertools.combinations(idx, 2):
        assert ch.compare(a, b) == "proper-subset"
    assert all(ch.is_copy(i).is_copy for i in idx if i != ch.bottom)
    with pytest.raises(ChainError):
        lift_Bn(assemble(cat.D(), LinOrderDesc.parse("inf:2")), 2)


def test_transport_Cn():
    base = assemble(cat.Q_line(), LinOrderDesc.parse("0:2"))
    ch = transport_Cn(base, 2)
    assert ch[ch.bottom].components == ()
    idx = ch.sample_indices(20)
    for a, b in itertools.combinations(idx, 2):
        assert ch.compare(a, b) == base.compare(a, b) == "proper-subset"
    assert all(ch.is_copy(i).is_copy for i in idx if i != ch.bottom)


def test_chain_B_omega_splits_across_blocks():
    ch = chain_B_omega(LinOrderDesc.parse("1/3:3"))
    for i in ch.sample_indices(16):
        if i == ch.bottom:
            continue
        e = ch[i]
        assert is_copy(cat.B_omega(), e).is_copy
        x = i[0]
        if x.is_finite:
            i0 = cat.block_of(F(x.floor_times(1)))
            for k in range(i0 + 1, i0 + 4):
                assert cat.rational_copy_verdict(Intersect((e, cat.block_interval(k)))).is_copy


@pytest.mark.parametrize("lift", ["B", "C"])
def test_transports_keep_cut_verdicts(lift):
    base = assemble(cat.Q_line(), LinOrderDesc.parse("0:2,inf:2"))
    ch = lift_Bn(base, 2) if lift == "B" else transport_Cn(base, 2)
    for x0 in (F(0), F(1), F(-1, 2), sqrt2_plus(-1)):
        for side in ("max_A", "min_B"):
            a, b = cut_analysis(base, x0, side), cut_analysis(ch, x0, side)
            assert a.verdict == b.verdict and a.row == b.row
            assert all(b.checks.values()), b.checks


# -- cut tables ---------------------------------------------------------------------


def test_D_cut_rows(d_chain):
    off_J = F(1, 3)
    r1 = cut_analysis(d_chain, off_J)
    assert r1.row == 1 and r1.verdict == EQUAL and equivalent(r1.interB, d_chain.A(off_J))
    r2 = cut_analysis(d_chain, F(-8))
    assert r2.row == 2 and r2.verdict == SINGLETON_GAP and r2.witness == F(-8)
    assert equivalent(r2.interB, Union((d_chain.A(F(-8)), FiniteSet([F(-8)]))))
    r4 = cut_analysis(d_chain, F(0))
    assert r4.row == 4 and r4.verdict == SINGLETON_GAP
    for rep in (r1, r2, r4):
        assert all(rep.checks.values()), rep.checks
        assert equivalent(rep.interB, closed_form(d_chain, rep.x0, rep.row))
    lump = cut_analysis(d_chain, F(0), ("lump", 1))
    assert lump.verdict == LUMP_CUT and lump.gap == 1


def test_D_row_three_on_a_companion_chain():
    ch = assemble(cat.D(), LinOrderDesc.parse("0:3,1/2:2,inf:2"))
    rep = cut_analysis(ch, F(1, 2))
    assert rep.row == 3 and rep.verdict == EQUAL
    assert equivalent(rep.interB, closed_form(ch, F(1, 2), 3))


def test_C_omega_cut_rows(w_chain):
    r4 = cut_analysis(w_chain, F(0))
    assert r4.row == 4 and r4.verdict == SINGLETON_GAP and r4.gap == -1 and r4.witness == 0
    assert product_equal(
        r4.interB, cat.product_union(w_chain.A_plus(F(0)), ProductSetExpr.times(FiniteSet([0]), cat.OMEGA_PLUS))
    )
    r3 = cut_analysis(w_chain, sqrt2_plus(-1))
    assert r3.row == 3 and r3.verdict == EQUAL
    r1 = cut_analysis(w_chain, sqrt2_plus(-3))
    assert r1.row == 1 and r1.verdict == EQUAL
    for rep in (r1, r3, r4):
        assert all(rep.checks.values())
        assert product_equal(rep.interB, closed_form(w_chain, rep.x0, rep.row))


def test_cut_analysis_errors(d_chain):
    with pytest.raises(ChainError):
        cut_analysis(d_chain, POS_INF, "max_A")
    with pytest.raises(ChainError):
        cut_analysis(d_chain, F(1), ("lump", 1))


# -- embedding into the reals -------------------------------------------------------


def test_r_embedding_examples():
    S = cat.Q_line()
    enum = [RATIONALS[i] for i in range(40)]
    rep = r_embedding(S, [EMPTY, FULL], enum, 40)
    assert rep.values[0] == 0 and rep.values[1] == 2 - F(1, 2 ** 39)
    A = Interval(NEG_INF, 0)
    B = Union((A, FiniteSet([F(1)])))
    assert r_embedding(S, [A, B], enum, 40).strictly_increasing
    # the differing point 1 sits at position 2; cutting before it merges the two
    assert not r_embedding(S, [A, B], enum, 2).strictly_increasing
    with pytest.raises(ChainError):
        r_embedding(S, [FiniteSet([1]), FiniteSet([2])], enum, 10)


def test_r_embedding_on_a_small_chain(d_chain):
    els = [d_chain[i] for i in d_chain.sample_indices(12)]
    enum = enumeration_of(d_chain.structure, d_chain[d_chain.top], 2000)
    rep = r_embedding(d_chain.structure, els, enum, 2000)
    assert rep.strictly_increasing and rep.distinct == len(els)


# -- maximality ---------------------------------------------------------------------


def test_probe_examples(d_chain):
    x0 = F(-8)
    assert maximality_probe(d_chain, Union((d_chain.A(x0), FiniteSet([x0])))).outcome == NOT_A_COPY
    assert maximality_probe(d_chain, d_chain.A(x0)).outcome == IN_CHAIN
    assert maximality_probe(d_chain, d_chain[(Cut.of(0), 1)]).outcome == IN_CHAIN
    other = Union((d_chain.A(F(-1)), FiniteSet([F(7)])))
    assert maximality_probe(d_chain, other).outcome in (INCOMPARABLE, NOT_A_COPY)


def test_probe_family_finds_no_insertions(w_chain):
    grid = [Cut.of(0), sqrt2_plus(-1), Cut.of(F(-3, 2)), sqrt2_plus(-3)]
    results = probe_family(w_chain, grid)
    assert len(results) >= 20
    assert not [r for _, r in results if r.outcome == POTENTIAL_INSERTION]


# -- unions of chains ---------------------------------------------------------------------


def test_union_of_chain_examples(d_chain):
    els = [d_chain.A(x) for x in (F(-3), F(-1), sqrt2_plus(-1))]
    v = union_of_chain_is_copy(cat.D(), els, J=J)
    assert v.is_copy
    single = union_of_chain_is_copy(cat.D(), els[:1], J=J)
    assert single.is_copy
    xs = [F(-2), F(-1), F(1)]
    v = union_of_chain_is_copy(cat.Q_line(), [Intersect((J, Interval(NEG_INF, x))) for x in xs])
    assert v.is_copy
    assert equivalent(parse_sexpr(v.evidence["union"]), Intersect((J, Interval(NEG_INF, 1))))
    with pytest.raises(ChainError):
        union_of_chain_is_copy(cat.Q_line(), [FULL, Interval(NEG_INF, 0)])


def test_intersections_shrink_to_empty(d_chain, w_chain):
    assert intersection_shrinks(d_chain) and intersection_shrinks(w_chain)
