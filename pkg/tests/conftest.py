import sys
from fractions import Fraction as F

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from copychains.qset import FULL, POS_INF, Cut, DenseClass, Diff, FiniteSet, Intersect, Interval, Union, sqrt2_plus

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def small_rationals(max_num: int = 40, max_den: int = 12):
    return st.builds(
        F,
        st.integers(min_value=-max_num, max_value=max_num),
        st.integers(min_value=1, max_value=max_den),
    )


def _leaf(rng):
    r = rng.random()
    if r < 0.3:
        return DenseClass(rng.randrange(8))
    if r < 0.6:
        lo = F(rng.randint(-6, 6), rng.randint(1, 3))
        hi = lo + F(rng.randint(1, 6), rng.randint(1, 2))
        lo_c = sqrt2_plus(lo - 1) if rng.random() < 0.3 else Cut.of(lo)
        return Interval(lo_c, hi if rng.random() < 0.8 else POS_INF)
    if r < 0.9:
        return FiniteSet(F(rng.randint(-8, 8), rng.randint(1, 3)) for _ in range(rng.randint(0, 3)))
    return FULL


def random_expr(rng, depth):
    if depth == 0 or rng.random() < 0.25:
        return _leaf(rng)
    op = rng.choice(["u", "i", "d"])
    a, b = random_expr(rng, depth - 1), random_expr(rng, depth - 1)
    return {"u": Union((a, b)), "i": Intersect((a, b)), "d": Diff(a, b)}[op]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in mod.TITLES.items():
        ok, detail = mod.RESULTS.get(n, (False, "not run to completion"))
        terminalreporter.write_line(f"criterion {n:>2} {'PASS' if ok else 'FAIL'}: {title} -- {detail}")
