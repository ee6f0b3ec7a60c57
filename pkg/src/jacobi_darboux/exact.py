"""Exact univariate polynomials and rational functions over Q.

Scalars are :class:`fractions.Fraction`.  Polynomial arithmetic is delegated to
FLINT's ``fmpq_poly`` so that gcd normalization of rational functions stays
cheap even for degree ~100 numerators with large coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from flint import fmpq, fmpq_poly

from .errors import NotInvariantError
from .params import ParamSet, to_rat

__all__ = [
    "Poly",
    "RatFunc",
    "pochhammer",
    "pochhammer_int",
    "pochhammer_poly",
    "integer_roots",
    "shift_subst",
    "involute_subst",
    "rewrite_in_lambda",
    "lambda_poly",
]


def _q(x) -> fmpq:
    if isinstance(x, fmpq):
        return x
    r = to_rat(x)
    return fmpq(r.numerator, r.denominator)


def _frac(x: fmpq) -> Fraction:
    return Fraction(int(x.p), int(x.q))


class Poly:
    """Dense univariate polynomial with rational coefficients.

    ``var`` is only a display marker; arithmetic never checks it.
    """

    __slots__ = ("_p", "var")

    def __init__(self, coeffs: Iterable = (), var: str = "n"):
        if isinstance(coeffs, fmpq_poly):
            self._p = coeffs
        else:
            self._p = fmpq_poly([_q(c) for c in coeffs])
        self.var = var

    @classmethod
    def _wrap(cls, p: fmpq_poly, var: str = "n") -> "Poly":
        obj = cls.__new__(cls)
        obj._p = p
        obj.var = var
        return obj

    @classmethod
    def gen(cls, var: str = "n") -> "Poly":
        return cls._wrap(fmpq_poly([0, 1]), var)

    @classmethod
    def const(cls, c, var: str = "n") -> "Poly":
        return cls._wrap(fmpq_poly([_q(c)]), var)

    @classmethod
    def linear(cls, a, b, var: str = "n") -> "Poly":
        """a*var + b"""
        return cls._wrap(fmpq_poly([_q(b), _q(a)]), var)

    # -- structure ---------------------------------------------------------
    @property
    def coeffs(self) -> list[Fraction]:
        return [_frac(c) for c in self._p.coeffs()]

    @property
    def degree(self) -> int:
        return self._p.degree()

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def __bool__(self):
        return not self._p.is_zero()

    def leading(self) -> Fraction:
        if self._p.is_zero():
            return Fraction(0)
        return _frac(self._p.coeffs()[-1])

    def monic(self) -> "Poly":
        if self._p.is_zero():
            return self
        return Poly._wrap(self._p / self._p.coeffs()[-1], self.var)

    def is_constant(self) -> bool:
        return self._p.degree() <= 0

    # -- arithmetic --------------------------------------------------------
    def _other(self, other):
        if isinstance(other, Poly):
            return other._p
        if isinstance(other, fmpq_poly):
            return other
        if isinstance(other, (int, Fraction, fmpq, str)):
            return fmpq_poly([_q(other)])
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Poly._wrap(self._p + o, self.var)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Poly._wrap(self._p - o, self.var)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Poly._wrap(o - self._p, self.var)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Poly._wrap(self._p * o, self.var)

    __rmul__ = __mul__

    def __neg__(self):
        return Poly._wrap(-self._p, self.var)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial; use RatFunc")
        return Poly._wrap(self._p ** k, self.var)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, fmpq)):
            return Poly._wrap(self._p / _q(other), self.var)
        return RatFunc(self, other)

    def __rtruediv__(self, other):
        return RatFunc(other, self)

    def __divmod__(self, other: "Poly"):
        q, r = divmod(self._p, self._other(other))
        return Poly._wrap(q, self.var), Poly._wrap(r, self.var)

    def exquo(self, other: "Poly") -> "Poly":
        q, r = divmod(self._p, self._other(other))
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return Poly._wrap(q, self.var)

    def gcd(self, other: "Poly") -> "Poly":
        return Poly._wrap(self._p.gcd(self._other(other)), self.var)

    def lcm(self, other: "Poly") -> "Poly":
        if self.is_zero() or other.is_zero():
            return Poly((), self.var)
        g = self._p.gcd(other._p)
        return Poly._wrap((self._p * other._p) / g, self.var).monic()

    def derivative(self) -> "Poly":
        return Poly._wrap(self._p.derivative(), self.var)

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self._p == o

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __call__(self, x):
        """Evaluate at a rational, or compose with another polynomial."""
        if isinstance(x, Poly):
            return Poly._wrap(self._p(x._p), x.var)
        if isinstance(x, RatFunc):
            return RatFunc(self).compose(x)
        return _frac(self._p(_q(x)))

    def shift(self, d) -> "Poly":
        """p(var + d)."""
        if d == 0:
            return self
        return Poly._wrap(self._p(fmpq_poly([_q(d), 1])), self.var)

    def with_var(self, var: str) -> "Poly":
        return Poly._wrap(self._p, var)

    def primitive_integer_form(self) -> list[int]:
        """Integer coefficients of the primitive integer multiple (positive leading term)."""
        num = self._p.numer()
        ints = [int(c) for c in num.coeffs()]
        from math import gcd

        g = 0
        for c in ints:
            g = gcd(g, c)
        if g == 0:
            return ints
        ints = [c // g for c in ints]
        if ints[-1] < 0:
            ints = [-c for c in ints]
        return ints

    def __repr__(self):
        return _poly_str(self.coeffs, self.var)


def _poly_str(cs: list[Fraction], var: str) -> str:
    if not cs:
        return "0"
    parts = []
    for i in range(len(cs) - 1, -1, -1):
        c = cs[i]
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if mono and abs(c) == 1:
            term = mono
        else:
            term = str(abs(c)) + ("*" + mono if mono else "")
        sign = "-" if c < 0 else "+"
        parts.append((sign, term))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, term in parts[1:]:
        s += f" {sign} {term}"
    return s


class RatFunc:
    """Reduced quotient num/den with gcd(num, den) = 1 and den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num=0, den=1, _normalized: bool = False):
        num = num if isinstance(num, Poly) else _as_poly(num)
        den = den if isinstance(den, Poly) else _as_poly(den)
        if _normalized:
            self.num, self.den = num, den
            return
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = Poly._wrap(fmpq_poly(), num.var), Poly._wrap(fmpq_poly([1]), num.var)
            return
        if den.degree > 0:
            g = num._p.gcd(den._p)
            if g.degree() > 0:
                num = Poly._wrap(divmod(num._p, g)[0], num.var)
                den = Poly._wrap(divmod(den._p, g)[0], den.var)
        lc = den._p.coeffs()[-1]
        if lc != 1:
            num = Poly._wrap(num._p / lc, num.var)
            den = Poly._wrap(den._p / lc, den.var)
        self.num, self.den = num, den

    @classmethod
    def const(cls, c, var: str = "n") -> "RatFunc":
        return cls(Poly.const(c, var), Poly.const(1, var), _normalized=True)

    @classmethod
    def gen(cls, var: str = "n") -> "RatFunc":
        return cls(Poly.gen(var), Poly.const(1, var), _normalized=True)

    @property
    def var(self) -> str:
        return self.num.var

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.degree == 0

    def is_constant(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num(0) if not self.num.is_zero() else Fraction(0)

    # -- arithmetic --------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "RatFunc | None":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc(other, Poly.const(1, other.var), _normalized=True)
        if isinstance(other, (int, Fraction, fmpq, str)):
            return RatFunc.const(other)
        return None

    def __add__(self, other):
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            return self
        if self.num.is_zero():
            return o
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        if self.num.is_zero() or o.num.is_zero():
            return RatFunc(Poly((), self.var))
        if o.is_constant():
            return RatFunc(self.num * o.num, self.den, _normalized=True)
        if self.is_constant():
            return RatFunc(o.num * self.num, o.den, _normalized=True)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num ** k, self.den ** k, _normalized=True)

    def __eq__(self, other):
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, x):
        """Evaluate at a rational (ZeroDivisionError at a pole) or substitute a Poly."""
        if isinstance(x, (Poly, RatFunc)):
            return self.compose(x)
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole of {self} at {x}")
        return self.num(x) / d

    def compose(self, s) -> "RatFunc":
        """self(s) for a polynomial or rational function s."""
        if isinstance(s, Poly):
            return RatFunc(self.num(s), self.den(s))
        a, b = s.num, s.den
        dn, dd = max(self.num.degree, 0), max(self.den.degree, 0)
        top = max(dn, dd)

        def hom(p: Poly, deg: int) -> Poly:
            acc = Poly((), a.var)
            cs = p.coeffs
            for i, c in enumerate(cs):
                acc = acc + (a ** i) * (b ** (top - i)) * c
            return acc

        return RatFunc(hom(self.num, dn), hom(self.den, dd))

    def derivative(self) -> "RatFunc":
        return RatFunc(
            self.num.derivative() * self.den - self.num * self.den.derivative(), self.den ** 2
        )

    def shift(self, d) -> "RatFunc":
        if d == 0:
            return self
        return RatFunc(self.num.shift(d), self.den.shift(d))

    def with_var(self, var: str) -> "RatFunc":
        return RatFunc(self.num.with_var(var), self.den.with_var(var), _normalized=True)

    def __repr__(self):
        if self.den.degree == 0:
            return repr(self.num)
        return f"({self.num!r})/({self.den!r})"


def _as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, RatFunc):
        if not x.is_poly():
            raise TypeError("expected a polynomial")
        return x.num
    return Poly.const(x)


# -- Pochhammer symbols ------------------------------------------------------


def pochhammer(x, k: int) -> Fraction:
    """Rising factorial (x)_k = x (x+1) ... (x+k-1); (x)_0 = 1."""
    if k < 0:
        raise ValueError("pochhammer needs k >= 0; use pochhammer_int for negative k")
    x = to_rat(x)
    out = Fraction(1)
    for r in range(k):
        out *= x + r
    return out


def pochhammer_int(x, k: int) -> Fraction:
    """Gamma(x+k)/Gamma(x) for any integer k, i.e. 1/(x+k)_{-k} when k < 0."""
    if k >= 0:
        return pochhammer(x, k)
    x = to_rat(x)
    den = pochhammer(x + k, -k)
    if den == 0:
        raise ZeroDivisionError(f"({x})_{k} has a pole")
    return 1 / den


def pochhammer_poly(offset, k: int, var: str = "n") -> Poly:
    """prod_{r=0}^{k-1} (var + offset + r) as a polynomial."""
    out = fmpq_poly([1])
    off = _q(offset)
    for r in range(k):
        out *= fmpq_poly([off + r, 1])
    return Poly._wrap(out, var)


# -- integer roots ------------------------------------------------------------


def integer_roots(p: Poly) -> set[int]:
    """Exact set of integer roots of a nonzero polynomial.

    Candidates come from the rational roots of the primitive integer form (every
    integer root divides the trailing nonzero coefficient); FLINT's exact
    factorization enumerates them without factoring the constant term.
    """
    if isinstance(p, RatFunc):
        p = p.num
    if p.is_zero():
        raise ValueError("integer_roots of the zero polynomial")
    if p.degree <= 0:
        return set()
    out = set()
    for root, _mult in p._p.roots():
        if root.q == 1:
            out.add(int(root.p))
    return out


# -- substitutions ------------------------------------------------------------


def shift_subst(r: RatFunc, d: int) -> RatFunc:
    """r(n + d), reduced."""
    return r.shift(d)


def _involution_poly(params: ParamSet, var: str = "n") -> Poly:
    return Poly.linear(-1, -(2 * params.eps + params.alpha + params.beta + 1), var)


def involute_subst(r, params: ParamSet):
    """r(-(n + 2 eps + alpha + beta + 1))."""
    if isinstance(r, Poly):
        return r(_involution_poly(params, r.var))
    return r.compose(_involution_poly(params, r.var))


def lambda_poly(params: ParamSet, var: str = "n") -> Poly:
    """(n + eps)(n + eps + alpha + beta + 1)."""
    e, a, b = params.eps, params.alpha, params.beta
    return Poly.linear(1, e, var) * Poly.linear(1, e + a + b + 1, var)


def _even_part_in_lambda(p: Poly, params: ParamSet) -> tuple[Poly, Poly]:
    """Split p(n) = E(u^2) + u*O(u^2) with u = n + center; return (E(x + g^2), odd part in n).

    Since lambda(n) = u^2 - g^2 with g = (alpha+beta+1)/2, E evaluated at
    u^2 = x + g^2 gives the polynomial in x = lambda.
    """
    c = params.center
    g2 = ((params.alpha + params.beta + 1) / 2) ** 2
    in_u = p._p(fmpq_poly([_q(-c), 1]))  # p(u - c)
    cs = in_u.coeffs()
    even = fmpq_poly([cs[i] for i in range(0, len(cs), 2)]) if cs else fmpq_poly()
    odd_u = fmpq_poly([cs[i] if i % 2 == 1 else 0 for i in range(len(cs))]) if cs else fmpq_poly()
    in_x = even(fmpq_poly([_q(g2), 1]))
    odd_n = odd_u(fmpq_poly([_q(c), 1]))  # back to n
    return Poly._wrap(in_x, "x"), Poly._wrap(odd_n, p.var)


def rewrite_in_lambda(r, params: ParamSet) -> RatFunc:
    """Return rho(x) with rho(lambda_eps(n)) = r(n) for an involution-invariant r.

    Raises NotInvariantError (witness = odd part of r) otherwise.
    """
    if isinstance(r, Poly):
        r = RatFunc(r)
    num_x, num_odd = _even_part_in_lambda(r.num, params)
    den_x, den_odd = _even_part_in_lambda(r.den, params)
    if not (num_odd.is_zero() and den_odd.is_zero()):
        odd = (r - involute_subst(r, params)) * Fraction(1, 2)
        raise NotInvariantError(f"{r} is not invariant under the involution", witness=odd)
    return RatFunc(num_x, den_x)
