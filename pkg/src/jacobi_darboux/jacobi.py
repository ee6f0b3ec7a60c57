"""The ε-shifted Jacobi family: operators, eigenvalue, gauge, kernel functions, series.

All closed forms are exact rational functions of n.  Ratios of Pochhammer
symbols (x+m)_n/(x)_n with integer m become rational in n; for non-integer m
the pointwise ``*_eval`` variants work for any integer n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import ScopeError
from .exact import Poly, RatFunc, pochhammer, pochhammer_int, pochhammer_poly
from .ndiff import DiffOp, SignedRatFunc
from .params import ParamSet, is_integer, to_rat
from .zdiff import DiffOpZ

__all__ = [
    "jacobi_L",
    "jacobi_L_tilde",
    "B_op",
    "lambda_fn",
    "phi_fn",
    "gamma_ratio",
    "gamma_ratio_eval",
    "KernelKind",
    "kernel_fn",
    "kernel_fn_eval",
    "contiguous_D",
    "p_series_coeffs",
    "p_series_coeffs_at",
    "ptilde_series_coeffs",
    "series_constant",
]

PLUS_PHI, PLUS_PSI, MINUS_PHI, MINUS_PSI = "phi+", "psi+", "phi-", "psi-"
FAMILIES = (PLUS_PHI, PLUS_PSI, MINUS_PHI, MINUS_PSI)


def _n() -> Poly:
    return Poly.gen("n")


def _lin(c) -> Poly:
    """n + c"""
    return Poly.linear(1, c)


def jacobi_L(params: ParamSet) -> DiffOp:
    """Tridiagonal a0(n) T + b0(n) + c0(n) T^{-1} with eigenfunction p_ε^{α,β}(n, z), eigenvalue z."""
    a, b, e = params.alpha, params.beta, params.eps
    s = params.shift_sum
    a0 = RatFunc(2 * _lin(e + 1) * _lin(e + a + b + 1), Poly.linear(2, s + 1) * Poly.linear(2, s + 2))
    b0 = RatFunc(Poly.const(b * b - a * a), Poly.linear(2, s) * Poly.linear(2, s + 2))
    c0 = RatFunc(2 * _lin(e + a) * _lin(e + b), Poly.linear(2, s) * Poly.linear(2, s + 1))
    return DiffOp({1: a0, 0: b0, -1: c0})


def jacobi_L_tilde(params: ParamSet) -> DiffOp:
    """φ(n)^{-1} L φ(n), written directly so that it makes sense for any α.

    Conjugation by a function leaves the diagonal untouched, so the constant
    term is the same (β²-α²)/(...) as in L.
    """
    a, b, e = params.alpha, params.beta, params.eps
    s = params.shift_sum
    up = RatFunc(2 * _lin(e + a + 1) * _lin(e + a + b + 1), Poly.linear(2, s + 1) * Poly.linear(2, s + 2))
    mid = RatFunc(Poly.const(b * b - a * a), Poly.linear(2, s) * Poly.linear(2, s + 2))
    down = RatFunc(2 * _lin(e) * _lin(e + b), Poly.linear(2, s) * Poly.linear(2, s + 1))
    return DiffOp({1: up, 0: mid, -1: down})


def B_op(alpha, beta) -> DiffOpZ:
    """(z²-1)∂² + (α-β+(α+β+2)z)∂."""
    alpha, beta = to_rat(alpha), to_rat(beta)
    return DiffOpZ({2: Poly([-1, 0, 1], "z"), 1: Poly([alpha - beta, alpha + beta + 2], "z")})


def lambda_fn(params: ParamSet) -> RatFunc:
    """λ_ε(n) = (n+ε)(n+ε+α+β+1)."""
    e = params.eps
    return RatFunc(_lin(e) * _lin(e + params.alpha + params.beta + 1))


# -- Pochhammer ratios ----------------------------------------------------------


def gamma_ratio(x, m: int) -> RatFunc:
    """(x+m)_n / (x)_n as a rational function of n, for integer m."""
    x = to_rat(x)
    if not is_integer(m):
        raise ScopeError(f"shift {m} is not an integer; no rational closed form")
    m = int(m)
    if m >= 0:
        return RatFunc(pochhammer_poly(x, m)) / pochhammer(x, m)
    m = -m
    return RatFunc(Poly.const(pochhammer(x - m, m)), pochhammer_poly(x - m, m))


def gamma_ratio_eval(x, m, n: int) -> Fraction:
    """(x+m)_n / (x)_n at an integer n, any rational m."""
    x, m = to_rat(x), to_rat(m)
    return pochhammer_int(x + m, n) / pochhammer_int(x, n)


def phi_fn(alpha, eps) -> RatFunc:
    """The gauge (ε+α+1)_n/(ε+1)_n for integer α."""
    alpha, eps = to_rat(alpha), to_rat(eps)
    if not is_integer(alpha):
        raise ScopeError(f"alpha = {alpha} is not an integer; the gauge is not rational")
    return gamma_ratio(eps + 1, int(alpha))


# -- kernel functions -------------------------------------------------------------


@dataclass(frozen=True)
class KernelKind:
    family: str
    index: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown kernel family {self.family!r}; use one of {FAMILIES}")
        if self.index < 0:
            raise ValueError("kernel index must be nonnegative")

    @property
    def sign(self) -> int:
        """+1 for the eigenvalue-1 family, -1 for the eigenvalue -1 family."""
        return 1 if self.family.endswith("+") else -1


def _kernel_parts(kind: KernelKind, params: ParamSet):
    """(gauge x, gauge m, sigma?, first offset, second offset, denominator constant).

    The function equals sigma^? * (x+m)_n/(x)_n * (-(n+o1))_i (n+o2)_i / const.
    """
    a, b, e = params.alpha, params.beta, params.eps
    i = kind.index
    fam = kind.family
    if fam == PLUS_PHI:
        return e + 1, a, False, e, e + a + b + 1, (-2) ** i * factorial(i) * pochhammer(a + 1, i)
    if fam == PLUS_PSI:
        return e + a + b + 1, -a, False, e + a + b, e + 1, (-2) ** i * factorial(i) * pochhammer(-a + 1, i)
    if fam == MINUS_PHI:
        return e + 1, b, True, e, e + a + b + 1, 2 ** i * factorial(i) * pochhammer(b + 1, i)
    return e + a + b + 1, -b, True, e + a + b, e + 1, 2 ** i * factorial(i) * pochhammer(-b + 1, i)


def _check_kernel_scope(kind: KernelKind, params: ParamSet, closed: bool):
    par = params.alpha if kind.sign > 0 else params.beta
    name = "alpha" if kind.sign > 0 else "beta"
    if closed and not is_integer(par):
        raise ScopeError(f"closed form of {kind.family} needs integer {name}, got {par}")
    if closed and kind.index > abs(par) - 1:
        raise ScopeError(
            f"{kind.family}^({kind.index}) is only defined for index <= |{name}|-1 = {abs(par) - 1}"
        )


def _neg_poch_poly(o, i: int) -> Poly:
    """(-(n+o))_i = prod_r (r - n - o)."""
    out = Poly.const(1)
    for r in range(i):
        out = out * Poly.linear(-1, r - o)
    return out


def kernel_fn(kind: KernelKind, params: ParamSet) -> SignedRatFunc:
    """Closed form of φ±^{(i)}, ψ±^{(i)}; the (-1)^n of the minus family is carried by σ."""
    _check_kernel_scope(kind, params, closed=True)
    x, m, signed, o1, o2, const = _kernel_parts(kind, params)
    g = gamma_ratio(x, int(m))
    body = g * RatFunc(_neg_poch_poly(o1, kind.index) * pochhammer_poly(o2, kind.index)) / const
    if signed:
        return SignedRatFunc(0, body)
    return SignedRatFunc(body)


def kernel_fn_eval(kind: KernelKind, params: ParamSet, n: int) -> Fraction:
    """Pointwise exact value, valid for rational α, β and any index."""
    _check_kernel_scope(kind, params, closed=False)
    x, m, signed, o1, o2, const = _kernel_parts(kind, params)
    i = kind.index
    v = gamma_ratio_eval(x, m, n) * pochhammer(-(n + o1), i) * pochhammer(n + o2, i) / const
    if signed and n % 2:
        v = -v
    return v


# -- contiguous operators ---------------------------------------------------------


def contiguous_D(kind: str, params: ParamSet) -> DiffOp:
    """The four index-shifting operators D_-^α, D_+^α, D_-^β, D_+^β.

    ``kind`` is one of "-alpha", "+alpha", "-beta", "+beta".
    """
    a, b, e = params.alpha, params.beta, params.eps
    s = params.shift_sum
    den0 = Poly.linear(2, s)
    den2 = Poly.linear(2, s + 2)
    if kind == "-alpha":
        if a == 0:
            raise ZeroDivisionError("D_-^alpha has the prefactor (eps+alpha)/alpha, undefined at alpha = 0")
        k = (e + a) / a
        return DiffOp({0: RatFunc(_lin(e + a + b) * k, den0), -1: RatFunc(-_lin(e + b) * k, den0)})
    if kind == "+alpha":
        k = (a + 1) / (e + a + 1)
        return DiffOp({1: RatFunc(2 * _lin(e + 1) * k, den2), 0: RatFunc(-2 * _lin(e + a + 1) * k, den2)})
    if kind == "-beta":
        return DiffOp({0: RatFunc(_lin(e + a + b), den0), -1: RatFunc(_lin(e + a), den0)})
    if kind == "+beta":
        return DiffOp({1: RatFunc(2 * _lin(e + 1), den2), 0: RatFunc(2 * _lin(e + b + 1), den2)})
    raise ValueError(f"unknown contiguous kind {kind!r}")


# -- series coefficients in t = (1-z)/2 -------------------------------------------


def series_constant(params: ParamSet) -> Fraction:
    """Normalizing constant of the negative-integer-α branch."""
    a, b, e = params.alpha, params.beta, params.eps
    m = int(-a)
    return (
        Fraction((-1) ** (m % 2))
        / factorial(m - 1)
        * pochhammer(-e, m)
        * pochhammer(e + a + b + 1, m)
        / factorial(m)
    )


def _negative_alpha(params: ParamSet) -> bool:
    return is_integer(params.alpha) and params.alpha < 0


def ptilde_series_coeffs(params: ParamSet, N: int) -> list[RatFunc]:
    """Coefficients of t^j, j = 0..N, of F(-(n+ε), n+ε+α+β+1; α+1; t)."""
    if _negative_alpha(params):
        raise ScopeError("the gauged series has no closed form for negative integer alpha")
    a, b, e = params.alpha, params.beta, params.eps
    out = []
    term = RatFunc.const(1)
    for j in range(N + 1):
        out.append(term)
        term = term * RatFunc(Poly.linear(-1, j - e) * _lin(e + a + b + 1 + j)) / ((j + 1) * (a + 1 + j))
    return out


def p_series_coeffs(params: ParamSet, N: int) -> tuple[int, list[RatFunc]]:
    """(valuation v, [c_v, ..., c_N]) with p_ε^{α,β}(n, z) = sum_j c_j(n) t^j, t = (1-z)/2.

    Needs integer α so that every coefficient is rational in n.
    """
    a, b, e = params.alpha, params.beta, params.eps
    if not is_integer(a):
        raise ScopeError("rational series coefficients need integer alpha; use p_series_coeffs_at")
    if a >= 0:
        phi = phi_fn(a, e)
        return 0, [phi * c for c in ptilde_series_coeffs(params, N)]
    m = int(-a)
    pre = gamma_ratio(e + a + b + 1, m) * series_constant(params)
    out = []
    term = pre
    for j in range(N - m + 1):
        out.append(term)
        term = term * RatFunc(Poly.linear(-1, j - e - a) * _lin(e + b + 1 + j)) / ((j + 1) * (m + 1 + j))
    return m, out


def p_series_coeffs_at(params: ParamSet, n: int, N: int) -> tuple[int, list[Fraction]]:
    """Pointwise version of :func:`p_series_coeffs` for any rational α."""
    a, b, e = params.alpha, params.beta, params.eps
    if not _negative_alpha(params):
        term = gamma_ratio_eval(e + 1, a, n)
        out = []
        for j in range(N + 1):
            out.append(term)
            term = term * (j - n - e) * (n + e + a + b + 1 + j) / ((j + 1) * (a + 1 + j))
        return 0, out
    m = int(-a)
    term = series_constant(params) * gamma_ratio_eval(e + a + b + 1, m, n)
    out = []
    for j in range(N - m + 1):
        out.append(term)
        term = term * (j - n - e - a) * (n + e + b + 1 + j) / ((j + 1) * (m + 1 + j))
    return m, out
