from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from jacobi_darboux.params import ParamSet

settings.register_profile(
    "default",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def rationals(max_num=12, max_den=9, nonzero=False):
    s = st.builds(Fraction, st.integers(-max_num, max_num), st.integers(1, max_den))
    return s.filter(bool) if nonzero else s


def non_integer_rationals(max_num=20, max_den=9):
    return rationals(max_num, max_den).filter(lambda x: x.denominator != 1)


@st.composite
def admissible_params(draw, alpha=None, beta=None):
    """(α, β, ε) with ε non-integral and every condition satisfied."""
    a = draw(rationals(6, 4)) if alpha is None else Fraction(alpha)
    b = draw(rationals(6, 4)) if beta is None else Fraction(beta)
    e = draw(non_integer_rationals())
    p = ParamSet.unchecked(a, b, e)
    if p.violated_conditions():
        from hypothesis import assume

        assume(False)
    return ParamSet(a, b, e)


@pytest.fixture
def eps13():
    return Fraction(1, 3)


SPEC_SHAPES = [(1, 0), (2, 0), (0, 1), (1, 1), (2, 1), (2, 2)]


@st.composite
def darboux_specs(draw, k, l, alpha=None, beta=None, eps=None):
    from hypothesis import assume

    from jacobi_darboux.darboux import DarbouxSpec, check_admissible

    e = eps if eps is not None else draw(st.sampled_from([Fraction(1, 3), Fraction(2, 7)]))
    a = alpha if alpha is not None else (max(k, 1) if k else 2)
    b = beta if beta is not None else l
    coord = rationals(7, 5)
    A = [draw(coord) for _ in range(k)]
    B = [draw(coord) for _ in range(k)]
    C = [draw(coord) for _ in range(l)]
    D = [draw(coord) for _ in range(l)]
    p = ParamSet.unchecked(a, b, e)
    assume(not p.violated_conditions())
    spec = DarbouxSpec(ParamSet(a, b, e), k, l, A, B, C, D)
    assume(check_admissible(spec)[0])
    return spec


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
