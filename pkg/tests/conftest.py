import pytest
from gmpy2 import mpq
from hypothesis import settings, strategies as st

from gkred.algebra import Poly, RatFunc, Ring, Scalar

settings.register_profile("exact", max_examples=200, deadline=None, derandomize=True)
settings.load_profile("exact")

RING2 = Ring(2)


def scalars(lo=-5, hi=5, den=4):
    return st.builds(lambda a, b, c: Scalar(mpq(a, c), mpq(b, c)), st.integers(lo, hi), st.integers(lo, hi),
                     st.integers(1, den))


def polys(ring=RING2, max_terms=4, max_exp=2):
    term = st.tuples(scalars(), st.lists(st.integers(0, max_exp), min_size=ring.nvars, max_size=ring.nvars))

    def build(terms):
        p = ring.zero()
        for c, e in terms:
            p = p + Poly.from_terms(ring, [(tuple(e), c)])
        return p

    return st.lists(term, max_size=max_terms).map(build)


def nonzero_polys(ring=RING2, **kw):
    return polys(ring, **kw).filter(lambda p: not p.is_zero())


def ratfuncs(ring=RING2):
    return st.builds(lambda a, b: RatFunc(a, b), polys(ring, max_terms=3), nonzero_polys(ring, max_terms=2))


@pytest.fixture
def ring3():
    return Ring(3)


def low_degree_polys(ring=RING2, max_deg=3, max_terms=3):
    """Polynomials of total degree <= max_deg."""
    mono = st.lists(st.integers(0, ring.nvars - 1), max_size=max_deg)

    def build(terms):
        p = ring.zero()
        for c, vs in terms:
            m = Poly.const(ring, c)
            for v in vs:
                m = m * ring.var(v)
            p = p + m
        return p

    return st.lists(st.tuples(scalars(), mono), max_size=max_terms).map(build)


def vector_fields(chart, **kw):
    from gkred.calculus import VectorField

    return st.lists(low_degree_polys(chart.ring, **kw), min_size=chart.dim, max_size=chart.dim).map(
        lambda cs: VectorField(chart, cs))


def one_forms(chart, **kw):
    from gkred.calculus import Form

    return st.lists(low_degree_polys(chart.ring, **kw), min_size=chart.dim, max_size=chart.dim).map(
        lambda cs: Form.from_components(chart, cs))


def forms(chart, max_deg=2, **kw):
    """Inhomogeneous forms with random components up to the given form degree."""
    from itertools import combinations

    keys = [k for d in range(max_deg + 1) for k in combinations(range(chart.dim), d)]
    return st.lists(st.tuples(st.sampled_from(keys), low_degree_polys(chart.ring, **kw)), max_size=4).map(
        lambda items: _sum_forms(chart, items))


def _sum_forms(chart, items):
    from gkred.calculus import Form

    out = Form.zero(chart)
    for k, p in items:
        out = out + Form(chart, {k: p})
    return out


def sections(chart, **kw):
    from gkred.courant import GSection

    return st.builds(GSection, vector_fields(chart, **kw), one_forms(chart, **kw))


# -- acceptance summary: one PASS/FAIL line per criterion

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n = marker.args[0]
    failed = rep.failed or (rep.when == "setup" and rep.skipped)
    _CRITERIA[n] = _CRITERIA.get(n, True) and not failed


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {n}: {'PASS' if _CRITERIA[n] else 'FAIL'}")
