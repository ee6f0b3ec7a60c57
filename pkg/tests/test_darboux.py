from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jacobi_darboux.darboux import (
    DarbouxSpec,
    auto_lift,
    build_bundle,
    build_f_basis,
    build_L,
    build_P,
    build_P_bar,
    build_P_tilde,
    build_Q,
    casoratian,
    check_admissible,
    eigen_poly,
    jordan_matrix,
    lift_via_contiguous,
    closed_form_L,
)
from jacobi_darboux.errors import InadmissibleError, ScopeError
from jacobi_darboux.exact import Poly, RatFunc
from jacobi_darboux.jacobi import KernelKind, jacobi_L, kernel_fn, kernel_fn_eval, phi_fn
from jacobi_darboux.ndiff import (
    DiffOp,
    SignedRatFunc,
    apply,
    compose,
    conjugate,
    involution_I,
    is_regular,
    poly_of_operator,
)
from jacobi_darboux.params import ParamSet
from jacobi_darboux.series import apply_n, hyp_family

from .conftest import SPEC_SHAPES, darboux_specs

E = Fraction(1, 3)
B0, B1 = Fraction(2), Fraction(5, 7)
SPEC52 = DarbouxSpec(ParamSet(2, 0, E), 2, 0, A=(1, 0), B=(B0, B1))
one = DiffOp.identity()
n = Poly.gen()


def kf(fam, i, p):
    return kernel_fn(KernelKind(fam, i), p)


# -- specs and bases -------------------------------------------------------------


def test_spec_validation():
    with pytest.raises(ValueError):
        DarbouxSpec(ParamSet(2, 0, E), 2, 0, A=(1,), B=(1, 0))
    with pytest.raises(ScopeError):
        DarbouxSpec(ParamSet(1, 0, E), 2, 0, A=(1, 0), B=(1, 0))
    with pytest.raises(ScopeError):
        DarbouxSpec(ParamSet(Fraction(1, 2), 0, E), 1, 0, A=(1,), B=(0,))
    with pytest.raises(ValueError):
        DarbouxSpec(ParamSet(2, 0, E), -1, 0)


def test_f_basis_examples():
    p = SPEC52.params
    f = build_f_basis(SPEC52)
    assert f[0] == kf("phi+", 0, p) + kf("psi+", 0, p) * B0
    assert f[1] == kf("phi+", 1, p) + kf("psi+", 1, p) * B0 + kf("psi+", 0, p) * B1
    q = ParamSet(2, 1, E)
    assert build_f_basis(DarbouxSpec(q, 1, 0, A=(1,), B=(0,))) == [SignedRatFunc(phi_fn(2, E))]
    g = build_f_basis(DarbouxSpec(q, 0, 1, C=(3,), D=(-2,)))
    assert g == [kf("phi-", 0, q) * 3 + kf("psi-", 0, q) * -2]


# -- admissibility ---------------------------------------------------------------


def test_zero_coordinates_inadmissible():
    spec = DarbouxSpec(ParamSet(2, 0, E), 2, 0, A=(0, 0), B=(0, 0))
    ok, wit = check_admissible(spec)
    assert not ok and wit == "identically zero"
    with pytest.raises(InadmissibleError):
        build_P(spec)


def test_single_gauge_kernel_admissible():
    assert check_admissible(DarbouxSpec(ParamSet(3, 1, E), 1, 0, A=(1,), B=(0,))) == (True, None)


@pytest.mark.parametrize("b0,b1", [(2, Fraction(5, 7)), (Fraction(-3, 4), Fraction(1, 9)), (0, 1)])
def test_admissibility_matches_window_evaluation(b0, b1):
    spec = DarbouxSpec(ParamSet(2, 0, E), 2, 0, A=(1, 0), B=(b0, b1))
    det = casoratian(build_f_basis(spec), [-2, -1])
    vanishes = False
    for m in range(-20, 21):
        try:
            vanishes |= det(m) == 0
        except ZeroDivisionError:
            vanishes = True
    assert check_admissible(spec)[0] == (not vanishes)


def test_inadmissible_integer_zero_found():
    # B0 chosen so that det vanishes at n = 0: f(n) = φ(n) + B0 ψ(n), det = f(-1)
    p = ParamSet(2, 0, E)
    phi = kernel_fn_eval(KernelKind("phi+", 0), p, -1)
    psi = kernel_fn_eval(KernelKind("psi+", 0), p, -1)
    spec = DarbouxSpec(p, 1, 0, A=(1,), B=(-phi / psi,))
    ok, wit = check_admissible(spec)
    assert not ok and wit == 0


# -- P, L, Q ---------------------------------------------------------------------


def test_first_order_factor():
    p = ParamSet(2, 1, E)
    P, _ = build_P(DarbouxSpec(p, 1, 0, A=(1,), B=(0,)))
    phi = phi_fn(2, E)
    assert P == one - DiffOp({-1: phi / phi.shift(-1)})


def test_factor_52_against_pointwise_determinant():
    P, dets = build_P(SPEC52)
    p = SPEC52.params
    assert P.support == (-2, 0) and P.coeff(0) == SignedRatFunc(1)
    fam = [("phi+", 0, 1), ("psi+", 0, B0)], [("phi+", 1, 1), ("psi+", 1, B0), ("psi+", 0, B1)]

    def fval(i, m):
        return sum(c * kernel_fn_eval(KernelKind(f, j, ), p, m) for f, j, c in fam[i])

    def det3(rows):
        (a, b, c), (d, e, f), (g, h, k) = rows
        return a * (e * k - f * h) - b * (d * k - f * g) + c * (d * h - e * g)

    for m in range(-5, 5):
        # expand det[f0(n+j), f1(n+j), T^j]_{j=-2..0} along the last column
        rows = [[fval(0, m + j), fval(1, m + j)] for j in (-2, -1, 0)]
        M = [[r[0], r[1], 0] for r in rows]
        coeffs = {}
        for j in range(3):
            M2 = [row[:] for row in M]
            M2[j][2] = 1
            coeffs[j - 2] = det3(M2)
        for j in (-2, -1):
            assert P.coeff(j)(m) == coeffs[j] / coeffs[0]
    for f in build_f_basis(SPEC52):
        assert apply(P, f).is_zero()


@given(st.sampled_from(SPEC_SHAPES).flatmap(lambda kl: darboux_specs(*kl)))
@settings(max_examples=12)
def test_bundle_identities(spec):
    b = build_bundle(spec)
    m = spec.order
    assert b.P.support == (-m, 0)
    L0 = jacobi_L(spec.params)
    q = eigen_poly(spec.k, spec.l)
    assert compose(b.L, b.P) == compose(b.P, L0)
    assert compose(b.Q, b.P) == poly_of_operator(q, L0)
    assert compose(b.P, b.Q) == poly_of_operator(q, b.L)
    assert closed_form_L(spec, b.dets) == b.L
    assert b.L.coeff(1) == L0.coeff(1)
    assert is_regular(b.L)[0]
    # bottom coefficient is (-1)^m det(n+1)/det(n)
    det = b.dets[0]
    assert b.P.coeff(-m) == det.shift(1) / det * (-1) ** m
    for f in build_f_basis(spec):
        assert apply(b.P, f).is_zero()
    b.check()


def test_trivial_spec():
    spec = DarbouxSpec(ParamSet(2, 0, E), 0, 0)
    b = build_bundle(spec)
    assert b.P == one and b.Q == one and b.L == jacobi_L(spec.params)
    assert build_L(spec) == jacobi_L(spec.params)
    assert build_Q(spec) == one


def test_kernels_of_both_signs_are_independent():
    p = ParamSet(2, 2, E)
    basis = [kf("phi+", i, p) for i in range(2)] + [kf("psi+", i, p) for i in range(2)]
    basis += [kf("phi-", i, p) for i in range(2)] + [kf("psi-", i, p) for i in range(2)]
    det = casoratian(basis, list(range(-8, 0)))
    assert not det.is_zero()


# -- symmetries ------------------------------------------------------------------


SYM_SPEC = DarbouxSpec(ParamSet(2, 1, E), 2, 1, A=(1, Fraction(1, 2)), B=(3, Fraction(2, 5)), C=(1,), D=(Fraction(4, 3),))


def test_reflection_symmetry():
    # (α, β, ε) -> (-α, -β, ε+α+β) with the φ and ψ coordinates exchanged
    s = SYM_SPEC
    p = s.params
    r = DarbouxSpec(ParamSet(-p.alpha, -p.beta, p.eps + p.alpha + p.beta), s.k, s.l, A=s.B, B=s.A, C=s.D, D=s.C)
    assert build_bundle(r).L == build_bundle(s).L


def test_sign_symmetry():
    # swap (α, k, A, B) with (β, l, C, D); coordinates pick up (-1)^r
    s = SYM_SPEC
    p = s.params

    def alt(xs):
        return tuple(x * (-1) ** r for r, x in enumerate(xs))

    r = DarbouxSpec(ParamSet(p.beta, p.alpha, p.eps), s.l, s.k, A=alt(s.C), B=alt(s.D), C=alt(s.A), D=alt(s.B))
    assert conjugate(build_bundle(r).L, SignedRatFunc.sigma()) == -build_bundle(s).L


# -- P̄ ---------------------------------------------------------------------------


def test_symmetric_factor_52():
    Pbar, rho, s = build_P_bar(SPEC52)
    p = SPEC52.params
    assert s == 1 and Pbar.support == (-1, 1)
    Pt, sign = build_P_tilde(SPEC52)
    assert sign == -1
    assert Pbar == DiffOp.scalar(RatFunc(n + p.center)) @ Pt
    assert p.center == E + Fraction(3, 2)


@given(st.sampled_from([(2, 0), (1, 1), (2, 2)]).flatmap(lambda kl: darboux_specs(*kl)))
@settings(max_examples=9)
def test_symmetric_factor_properties(spec):
    p = spec.params
    Pt, sign = build_P_tilde(spec)
    s = spec.order // 2
    assert sign == (-1) ** (s + int(p.alpha + p.beta) * spec.l)
    assert involution_I(Pt, p) == sign * Pt
    Pbar, rho, s = build_P_bar(spec)
    assert involution_I(Pbar, p) == Pbar
    phi = phi_fn(p.alpha, p.eps)
    P, _ = build_P(spec)
    assert DiffOp.scalar(rho) @ compose(DiffOp.T(-s), conjugate(Pbar, phi)) - P == DiffOp()


def test_symmetric_factor_needs_even_order():
    with pytest.raises(ScopeError):
        build_P_bar(DarbouxSpec(ParamSet(2, 0, E), 1, 0, A=(1,), B=(1,)))


# -- lifting ---------------------------------------------------------------------


def test_lift_trivial_bundle():
    p = ParamSet(2, 1, E)
    lifted = lift_via_contiguous(build_bundle(DarbouxSpec(p, 0, 0)), "alpha")
    assert lifted.spec.k == 1 and lifted.params.alpha == 3
    assert lifted.P.support == (-1, 0)


@pytest.mark.parametrize("direction", ["alpha", "beta"])
def test_lift_properties(direction):
    p = ParamSet(2, 2, E)
    b = build_bundle(DarbouxSpec(p, 1, 0, A=(1,), B=(Fraction(3, 2),)))
    lifted = lift_via_contiguous(b, direction)
    assert len(range(*lifted.P.support)) == len(range(*b.P.support)) + 1
    assert compose(lifted.L, lifted.P) == compose(lifted.P, jacobi_L(lifted.params))
    N = 30
    old, new = hyp_family(p, N), hyp_family(lifted.params, N)
    c = lifted.lift_factor
    for m in range(-5, 6):
        try:
            cm = c(m)
        except ZeroDivisionError:
            continue
        assert apply_n(b.P, old, m) == apply_n(lifted.P, new, m).scale(cm)


def test_auto_lift():
    b = build_bundle(DarbouxSpec(ParamSet(2, 1, E), 1, 0, A=(1,), B=(2,)))
    lifted = auto_lift(b)
    assert lifted.spec.order == 2 and lifted.params.alpha == 3
    even = build_bundle(SPEC52)
    assert auto_lift(even) is even
    stuck = build_bundle(DarbouxSpec(ParamSet(-1, -1, E), 1, 0, A=(1,), B=(2,)))
    with pytest.raises(ScopeError):
        auto_lift(stuck)


# -- Jordan structure ------------------------------------------------------------


def test_jordan_examples():
    assert jordan_matrix(SPEC52) == [[1, 1], [0, 1]]
    q = ParamSet(2, 2, E)
    assert jordan_matrix(DarbouxSpec(q, 0, 1, C=(1,), D=(1,))) == [[-1]]
    assert jordan_matrix(DarbouxSpec(q, 1, 1, A=(1,), B=(1,), C=(1,), D=(2,))) == [[1, 0], [0, -1]]
    assert jordan_matrix(DarbouxSpec(q, 0, 0)) == []
