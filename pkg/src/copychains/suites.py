"""Verification suites behind ``copychains verify`` and ``copychains chain``.

Every suite returns a plain dict with a "status" of PASS, FAIL or
INCONCLUSIVE and enough detail to see why.  Reports contain no timing or
environment data, so identical configs give identical reports.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, List, Sequence

from . import catalogue as cat
from .chains import (
    POTENTIAL_INSERTION,
    SINGLETON_GAP,
    ChainError,
    LazyChain,
    LinOrderDesc,
    assemble,
    chain_B_omega,
    closed_form,
    cut_analysis,
    enumeration_of,
    lift_Bn,
    probe_family,
    r_embedding,
    separating_enumeration,
    set_equal,
    show_set,
    transport_Cn,
)
from .generic import GenericOrder, saturate
from .order import all_posets, is_random_up_to, is_ultrahomogeneous, is_ultrahomogeneous_by_extension
from .qset import (
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
    sqrt2_plus,
)

PASS, FAIL, INCONCLUSIVE = "PASS", "FAIL", "INCONCLUSIVE"


def combine(statuses: Sequence[str]) -> str:
    if FAIL in statuses:
        return FAIL
    if INCONCLUSIVE in statuses:
        return INCONCLUSIVE
    return PASS


# -- ultrahomogeneity ------------------------------------------------------------


def uh_oracle_agreement(max_size: int = 5) -> dict:
    """The pairwise-isomorphism test against the one-point-extension test."""
    counts = {}
    disagreements = []
    uh = 0
    for n in range(max_size + 1):
        ps = all_posets(n)
        counts[n] = len(ps)
        for P in ps:
            a, _ = is_ultrahomogeneous(P)
            b, _ = is_ultrahomogeneous_by_extension(P)
            uh += a
            if a != b:
                disagreements.append(P.to_json())
    return {
        "status": PASS if not disagreements else FAIL,
        "posets_by_size": {str(n): c for n, c in counts.items()},
        "ultrahomogeneous": uh,
        "disagreements": disagreements,
    }


# -- random poset -----------------------------------------------------------------


def random_saturation(points: int = 8, level: int = 2, budget: int = 5000, modulus: int = 8) -> dict:
    g = GenericOrder(modulus)
    core = [RATIONALS[i] for i in range(points)]
    P, rep = saturate(g, core, level, budget)
    increasing = all(a < b for a, b in P.lt)
    if rep.budget_exhausted:
        status = INCONCLUSIVE
        random_ok, failing = None, None
    else:
        random_ok, failing = is_random_up_to(P, level, core=core)
        status = PASS if random_ok and increasing else FAIL
    return {
        "status": status,
        "core": [str(q) for q in core],
        "saturation": rep.to_json(),
        "random_up_to_level": random_ok,
        "first_failing_triple": failing.to_json() if failing is not None else None,
        "decided_pairs_increasing": increasing,
        "poset_size": len(P.elements),
    }


# -- copy predicates --------------------------------------------------------------


def _copy_cases(S: cat.AmbientStructure) -> List[tuple]:
    """(label, set, expected kind) triples with the expected answer known by construction."""
    J = DenseClass(0)
    neg = Interval(NEG_INF, 0)
    if S.id == "A_omega":
        return [("omega+", cat.OMEGA_PLUS, "Copy"), ("{1,2,3}", frozenset({1, 2, 3}), "NotCopy")]
    if S.id in ("Q", "B_omega"):
        return [
            ("(-inf,0)", neg, "Copy"),
            ("(-inf,0] on J", Union((Intersect((J, neg)), FiniteSet([0]))), "NotCopy"),
            ("(-1,1) minus {0}", Diff(Interval(-1, 1), FiniteSet([0])), "Copy" if S.id == "Q" else "NotCopy"),
            ("{0,1}", FiniteSet([0, 1]), "NotCopy"),
        ]
    if S.id == "D":
        return [
            ("J below 0", Intersect((J, neg)), "Copy"),
            ("J below 0 plus {-1/3}", Union((Intersect((J, neg)), FiniteSet([Fraction(-1, 3)]))), "Copy"),
            ("J below 0 plus {0}", Union((Intersect((J, neg)), FiniteSet([0]))), "NotCopy"),
            ("empty", FiniteSet(), "NotCopy"),
        ]
    n = S.n
    if S.id == "B_n":
        full = cat.ProductSetExpr.times(neg, cat.FiberSpec.finite(range(n)))
        short = cat.ProductSetExpr.times(neg, cat.FiberSpec.finite(range(max(n - 1, 0))))
        return [("(-inf,0) on every line", full, "Copy"), ("one line empty", short, "NotCopy")]
    if S.id == "C_n":
        full = cat.ProductSetExpr.times_n(neg, n)
        holed = cat.product_diff(full, cat.ProductSetExpr.points([(Fraction(-1), 0)]), n)
        return [("(-inf,0) x n", full, "Copy"), ("minus one point", holed, "NotCopy" if n > 1 else "Copy")]
    full = cat.ProductSetExpr.times(neg, cat.OMEGA_PLUS)
    capped = cat.ProductSetExpr([(neg, cat.OMEGA_PLUS), (FiniteSet([0]), cat.FiberSpec.finite([1]))])
    thin = cat.ProductSetExpr([(neg, cat.OMEGA_PLUS), (Interval(-2, -1), cat.FiberSpec.finite([0]))])
    return [
        ("(-inf,0) x omega+", full, "Copy"),
        ("plus (0,1)", capped, "NotCopy"),
        ("plus (-2,-1) x {0}", thin, "Copy"),
    ]


def copy_predicates(S: cat.AmbientStructure) -> dict:
    rows = []
    statuses = []
    for label, X, expected in _copy_cases(S):
        v = cat.is_copy(S, X)
        if v.kind == expected:
            st = PASS
        elif v.kind == "Inconclusive":
            st = INCONCLUSIVE
        else:
            st = FAIL
        statuses.append(st)
        rows.append({"case": label, "expected": expected, "verdict": v.kind, "reason": v.reason, "status": st})
    return {"status": combine(statuses), "cases": rows}


# -- positive families ------------------------------------------------------------


def _sample_qsets(rng: random.Random, count: int, base) -> list:
    out = []
    for _ in range(count):
        extra = []
        for _ in range(rng.randint(0, 2)):
            lo = Fraction(rng.randint(-20, 20), rng.randint(1, 4))
            extra.append(Interval(lo, lo + Fraction(rng.randint(1, 8), rng.randint(1, 3))))
        if rng.random() < 0.5:
            extra.append(DenseClass(rng.randrange(8)))
        drop = FiniteSet(RATIONALS[rng.randrange(200)] for _ in range(rng.randint(0, 3)))
        out.append(canonicalize(Diff(Union((base,) + tuple(extra)), drop)))
    return out


def positive_family(S: cat.AmbientStructure, instances: int = 100, seed: int = 0) -> dict:
    """The almost-cover family on Q-like structures; the copy family on C_n."""
    rng = random.Random(seed)
    if S.id in ("D", "Q", "B_omega"):
        C = DenseClass(1)
        member = cat.almost_cover_family(C)
        samples = _sample_qsets(rng, instances, Diff(FULL, C))
        # a few non-members too, so (P2) sees unions that matter
        samples += _sample_qsets(rng, instances // 10, Interval(NEG_INF, 0))
        res = cat.positive_family_axioms(member, samples)
        family = "B such that Q minus DenseClass(1) is almost contained in B"
    elif S.id in ("C_n",):
        n = S.n
        member = lambda X: cat.is_copy(S, X).is_copy
        samples = []
        for _ in range(instances):
            lo = Fraction(rng.randint(-20, 20), rng.randint(1, 4))
            samples.append(cat.ProductSetExpr.times_n(Interval(NEG_INF, lo), n))
        res = cat.positive_family_axioms(member, samples, cat.product_ops(n))
        family = f"copies of C_{n}"
    else:
        return {"status": INCONCLUSIVE, "reason": f"no positive family wired for {S.name}"}
    axioms = {k: v.to_json() for k, v in sorted(res.items())}
    return {
        "status": PASS if all(v.passed for v in res.values()) else FAIL,
        "family": family,
        "instances": instances,
        "axioms": axioms,
    }


# -- chains -----------------------------------------------------------------------


def chain_for(S: cat.AmbientStructure, desc: LinOrderDesc, modulus: int = 8) -> LazyChain:
    if S.id in ("D", "Q", "C_omega"):
        return assemble(S, desc, modulus if S.id != "D" else None)
    if S.id == "B_omega":
        return chain_B_omega(desc, modulus)
    if S.id == "B_n":
        return lift_Bn(assemble(cat.Q_line(), desc, modulus), S.n)
    if S.id == "C_n":
        return transport_Cn(assemble(cat.Q_line(), desc, modulus), S.n)
    raise ChainError(f"chains on {S.name} go through the positive-family route only")


def default_grid(chain: LazyChain) -> List[Cut]:
    """M, then dense-skeleton rationals, other rationals and irrationals by height."""
    root = chain.root
    grid = [x for x in root.I if x.is_finite]
    dense, other = [], []
    # every rational is in the skeleton of C_omega
    want_other = 0 if root.structure.id == "C_omega" else 3
    i = 0
    while len(dense) < 3 or len(other) < want_other:
        q = RATIONALS[i]
        i += 1
        if Cut.of(q) in root.I:
            continue
        inside = root.structure.id == "C_omega" or q in root.J
        bucket = dense if inside else other
        if len(bucket) < (3 if inside else want_other):
            bucket.append(Cut.of(q))
    grid += dense + other + [sqrt2_plus(-3), sqrt2_plus(-1), sqrt2_plus(1)]
    return sorted(set(grid))


def cut_rows(chain: LazyChain, grid: Sequence[Cut]) -> List[dict]:
    rows = []
    for x0 in grid:
        sides = ["max_A", "min_B"] + [("lump", j) for j in range(1, chain.lump_size(x0))]
        for side in sides:
            rep = cut_analysis(chain, x0, side)
            ok = all(rep.checks.values())
            if rep.row is not None:
                cf = closed_form(chain, x0, rep.row) if side == "max_A" else chain.root.A(x0)
                if chain.base is not None:
                    cf = chain.transform(cf)
                ok &= set_equal(chain.structure, rep.interB, cf)
            if rep.verdict == SINGLETON_GAP:
                ok &= rep.checks.get("interB_not_copy", False)
            rows.append(
                {
                    "x0": str(x0),
                    "side": rep.side,
                    "row": rep.row,
                    "verdict": rep.verdict,
                    "gap": "inf" if rep.gap < 0 else rep.gap,
                    "witness": None if rep.witness is None else str(rep.witness),
                    "unionA": show_set(chain.structure, rep.unionA),
                    "interB": show_set(chain.structure, rep.interB),
                    "ok": ok,
                }
            )
    return rows


def cut_tables(S: cat.AmbientStructure, desc: LinOrderDesc, modulus: int = 8, grid=None) -> dict:
    chain = chain_for(S, desc, modulus)
    grid = list(grid) if grid is not None else default_grid(chain)
    rows = cut_rows(chain, grid)
    probes = probe_family(chain, grid + [POS_INF])
    outcomes: Dict[str, int] = {}
    for _, r in probes:
        outcomes[r.outcome] = outcomes.get(r.outcome, 0) + 1
    inserted = [name for name, r in probes if r.outcome == POTENTIAL_INSERTION]
    rows_hit = sorted({r["row"] for r in rows if r["row"] is not None and r["side"] == "max_A"})
    ok = all(r["ok"] for r in rows) and not inserted
    return {
        "status": PASS if ok else FAIL,
        "structure": S.name,
        "M": str(desc),
        "provenance": chain.provenance,
        "rows_hit": rows_hit,
        "cuts": rows,
        "probes": outcomes,
        "potential_insertions": inserted,
    }


def embedding_report(chain: LazyChain, count: int, bits: int, separating: bool = True) -> dict:
    """f-values on a sampled subchain; collisions are reported, not judged."""
    idx = chain.sample_indices(count)[:count]
    elements = [chain.element(i) for i in idx]
    top = chain.element(chain.top)
    if separating:
        enum = separating_enumeration(chain.structure, elements, top, bits)
    else:
        enum = enumeration_of(chain.structure, top, bits)
    rep = r_embedding(chain.structure, elements, enum, bits)
    return {
        "enumeration": "separating" if separating else "height",
        "strictly_increasing": rep.strictly_increasing,
        "elements": len(elements),
        "bits": bits,
        "distinct_values": rep.distinct,
        "first_collision": None if rep.first_collision is None else [f"{idx[i][0]}:{idx[i][1]}" for i in rep.first_collision],
        "values": [{"index": f"{i[0]}:{i[1]}", "value": str(v)} for i, v in zip(idx, rep.values)],
    }


def lump_chains(chain: LazyChain) -> dict:
    return {
        str(x): [show_set(chain.structure, chain.element(i)) for i in chain.lump(x)]
        for x in sorted(chain.root.I)
    }


SUITES = ("uh-oracle", "random", "copy", "p-axioms", "cut-tables")
