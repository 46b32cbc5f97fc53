from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from vflab.polynomial import Polynomial, VarSet
from vflab.weyl import WeylContext, WeylOperator

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

XY = VarSet(("x", "y"))
XYZ = VarSet(("x", "y", "z"))

rationals = st.builds(
    Fraction, st.integers(-6, 6), st.integers(1, 4)
)
nonzero_rationals = rationals.filter(bool)


def exponents(n, max_deg):
    return st.tuples(*[st.integers(0, max_deg)] * n)


def polynomials(varset=XY, max_terms=5, max_deg=3):
    return st.dictionaries(exponents(len(varset), max_deg), nonzero_rationals, max_size=max_terms).map(
        lambda d: Polynomial(varset, d)
    )


def weyl_operators(ctx, max_terms=3, max_order=2, coeff_terms=3, coeff_deg=2):
    n = len(ctx.varset)
    coeff = polynomials(ctx.coeff_varset, coeff_terms, coeff_deg)

    def build(pairs):
        out = ctx.zero()
        for beta, h in pairs:
            out = out + ctx.monomial(beta, h)
        return out

    return st.lists(st.tuples(exponents(n, max_order), coeff), max_size=max_terms).map(build)


@pytest.fixture
def xy():
    return XY


@pytest.fixture
def weyl_xy():
    return WeylContext(XY)


_SESSION_START = []


def pytest_sessionstart(session):
    import time

    _SESSION_START.append(time.perf_counter())


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    import sys
    import time

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    from vflab import kernels

    terminalreporter.section("acceptance criteria")
    terminalreporter.write_line(f"kernel backend: {kernels.BACKEND}")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
    wall = time.perf_counter() - _SESSION_START[0]
    verdict = "PASS" if wall <= mod.SUITE_LIMIT_S else "FAIL"
    terminalreporter.write_line(
        f"{verdict} criterion 14: full test session wall-clock {wall:.1f}s, limit {mod.SUITE_LIMIT_S}s"
    )


def pytest_sessionfinish(session, exitstatus):
    import sys
    import time

    mod = sys.modules.get("test_acceptance")
    if mod is not None and _SESSION_START and time.perf_counter() - _SESSION_START[0] > mod.SUITE_LIMIT_S:
        session.exitstatus = 1
