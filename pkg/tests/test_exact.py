from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from jacobi_darboux.errors import NotInvariantError
from jacobi_darboux.exact import (
    Poly,
    RatFunc,
    integer_roots,
    involute_subst,
    lambda_poly,
    pochhammer,
    pochhammer_poly,
    rewrite_in_lambda,
    shift_subst,
)
from jacobi_darboux.params import ParamSet

from .conftest import admissible_params, rationals

n = Poly.gen()
P13 = ParamSet(2, 0, Fraction(1, 3))


def polys(max_deg=4):
    return st.lists(rationals(), min_size=0, max_size=max_deg + 1).map(Poly)


def ratfuncs():
    return st.tuples(polys(), polys().filter(lambda p: not p.is_zero())).map(lambda t: RatFunc(*t))


# -- pochhammer ----------------------------------------------------------------


def test_pochhammer_values():
    assert pochhammer(Fraction(7, 3), 0) == 1
    assert pochhammer(1, 4) == 24
    assert pochhammer(-3, 5) == 0


def test_pochhammer_poly_values():
    assert pochhammer_poly(0, 2) == n * (n + 1)
    assert pochhammer_poly(Fraction(4, 3), 2) == (n + Fraction(4, 3)) * (n + Fraction(7, 3))
    assert pochhammer_poly(Fraction(5, 11), 0) == Poly.const(1)


@given(rationals(), st.integers(0, 6), st.integers(-5, 5))
def test_pochhammer_poly_matches_scalar(off, k, x):
    assert pochhammer_poly(off, k)(x) == pochhammer(x + off, k)


# -- integer roots ---------------------------------------------------------------


def test_integer_roots_examples():
    assert integer_roots(n * n - 1) == {-1, 1}
    assert integer_roots(n * n + 1) == set()
    assert integer_roots(2 * n - 3) == set()
    with pytest.raises(ValueError):
        integer_roots(Poly.const(0))


@given(st.lists(st.integers(-10_000, 10_000), min_size=1, max_size=4), st.lists(rationals(nonzero=True), max_size=2))
def test_integer_roots_exact(roots, extra):
    p = Poly.const(1)
    for r in roots:
        p = p * (n - r)
    for c in extra:
        if c.denominator != 1:
            p = p * (n - c)
    assert integer_roots(p) == set(roots)


def test_integer_roots_window_spot_check():
    p = (n - 9999) * (n + 17) * (3 * n - 1) * (n * n + 5)
    window = range(-10_000, 10_001)
    assert integer_roots(p) == {m for m in window if p(m) == 0}


# -- field axioms ----------------------------------------------------------------


@given(rationals(), rationals(), rationals(nonzero=True))
def test_rational_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a / c) * c == a
    assert a - a == 0


@given(ratfuncs(), ratfuncs(), ratfuncs())
def test_ratfunc_ring_axioms(f, g, h):
    assert (f + g) * h == f * h + g * h
    assert (f * g) * h == f * (g * h)
    if not g.is_zero():
        assert (f / g) * g == f


@given(ratfuncs())
def test_ratfunc_normal_form(r):
    assert r.den.leading() == 1
    assert r.num.gcd(r.den).degree == 0


# -- substitutions ---------------------------------------------------------------


@given(admissible_params(), st.integers(-4, 4))
def test_lambda_shift_difference(p, d):
    lam = RatFunc(lambda_poly(p))
    lhs = lam - shift_subst(lam, d)
    rhs = RatFunc(-d * Poly.linear(2, 2 * p.eps + p.alpha + p.beta + d + 1))
    assert lhs == rhs


def test_shift_trivial():
    r = RatFunc(n * n + 1, n - 3)
    assert shift_subst(r, 0) == r
    assert shift_subst(RatFunc(n), 1) == RatFunc(n + 1)


@given(admissible_params())
def test_involution_examples(p):
    lam = RatFunc(lambda_poly(p))
    assert involute_subst(lam, p) == lam
    assert involute_subst(RatFunc.const(Fraction(5, 2)), p) == RatFunc.const(Fraction(5, 2))
    u = RatFunc(n + p.center)
    assert involute_subst(u, p) == -u


@given(admissible_params(), ratfuncs())
def test_involution_is_involutive(p, r):
    assert involute_subst(involute_subst(r, p), p) == r


# -- rewriting in λ ---------------------------------------------------------------


def test_rewrite_examples():
    p = P13
    lam = RatFunc(lambda_poly(p))
    x = Poly.gen("x")
    assert rewrite_in_lambda(lam, p) == RatFunc(x)
    assert rewrite_in_lambda(lam * lam + lam, p) == RatFunc(x * x + x)
    with pytest.raises(NotInvariantError) as err:
        rewrite_in_lambda(RatFunc(n), p)
    assert not err.value.witness.is_zero()


@given(admissible_params(), ratfuncs())
def test_rewrite_inverts_substitution(p, rho):
    rho = rho.with_var("x")
    lam = lambda_poly(p)
    # substitute x := λ(n)
    r = RatFunc(rho.num(lam), rho.den(lam))
    assert rewrite_in_lambda(r, p) == rho
