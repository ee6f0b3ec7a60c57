"""Truncated Laurent series in t = (1-z)/2 with tracked precision.

A series stores its coefficients from the valuation upward together with the
largest exponent through which they are exact.  Every operation propagates
that bound, so a residual is called zero only when all of its known
coefficients vanish.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from typing import Callable

from flint import fmpq, fmpq_poly

from .exact import Poly, RatFunc
from .ndiff import DiffOp
from .params import ParamSet, to_rat
from .zdiff import DiffOpZ

__all__ = [
    "LaurentSeries",
    "SeriesFamily",
    "hyp_family",
    "apply_z",
    "apply_n",
    "psi_family",
    "verify_eigen_z",
    "EigenReport",
    "z_to_t",
]


def _q(x) -> fmpq:
    if isinstance(x, fmpq):
        return x
    r = to_rat(x)
    return fmpq(r.numerator, r.denominator)


def _poly_valuation(p: fmpq_poly) -> int:
    cs = p.coeffs()
    for i, c in enumerate(cs):
        if c != 0:
            return i
    return -1


class LaurentSeries:
    """sum_{e=val}^{known} c_e t^e, exact through exponent ``known``."""

    __slots__ = ("val", "poly", "known")

    def __init__(self, val: int, poly: fmpq_poly, known: int):
        # poly[i] is the coefficient of t^(val+i); drop what is beyond `known`
        if poly.degree() > known - val:
            poly = poly.truncate(max(known - val + 1, 0))
        shift = _poly_valuation(poly)
        if shift > 0:
            poly = poly.right_shift(shift)
            val += shift
        elif shift < 0:
            val = known + 1
        self.val = val
        self.poly = poly
        self.known = known

    @classmethod
    def from_coeffs(cls, val: int, coeffs, known: int | None = None) -> "LaurentSeries":
        coeffs = list(coeffs)
        if known is None:
            known = val + len(coeffs) - 1
        return cls(val, fmpq_poly([_q(c) for c in coeffs]), known)

    @classmethod
    def exact_poly(cls, p: fmpq_poly, known: int) -> "LaurentSeries":
        return cls(0, p, known)

    def is_zero(self) -> bool:
        """True when every known coefficient vanishes."""
        return self.poly.is_zero()

    def coeff(self, e: int) -> Fraction:
        if e > self.known:
            raise ValueError(f"exponent {e} beyond known order {self.known}")
        i = e - self.val
        if i < 0 or i > self.poly.degree():
            return Fraction(0)
        c = self.poly[i]
        return Fraction(int(c.p), int(c.q))

    def coeff_list(self) -> list[Fraction]:
        return [self.coeff(e) for e in range(self.val, self.known + 1)]

    def first_nonzero(self) -> int | None:
        return None if self.poly.is_zero() else self.val

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        known = min(self.known, other.known)
        v = min(self.val, other.val)
        a = self.poly.left_shift(self.val - v) if self.val > v else self.poly
        b = other.poly.left_shift(other.val - v) if other.val > v else other.poly
        return LaurentSeries(v, a + b, known)

    def __neg__(self):
        return LaurentSeries(self.val, -self.poly, self.known)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "LaurentSeries":
        c = _q(c)
        if c == 0:
            return LaurentSeries(self.known + 1, fmpq_poly(), self.known)
        return LaurentSeries(self.val, self.poly * c, self.known)

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            known = min(self.val + other.known, other.val + self.known)
            v = self.val + other.val
            n = max(known - v + 1, 0)
            return LaurentSeries(v, self.poly.mul_low(other.poly, n) if n else fmpq_poly(), known)
        return self.scale(other)

    __rmul__ = __mul__

    def shift_t(self, k: int) -> "LaurentSeries":
        """Multiply by t^k (k may be negative)."""
        return LaurentSeries(self.val + k, self.poly, self.known + k)

    def mul_poly(self, p: fmpq_poly) -> "LaurentSeries":
        """Multiply by an exact polynomial in t."""
        if p.is_zero():
            return LaurentSeries(self.known + 1, fmpq_poly(), self.known)
        vp = _poly_valuation(p)
        known = self.known + vp
        n = max(known - self.val + 1, 0)
        return LaurentSeries(self.val, self.poly.mul_low(p, n), known)

    def d_t(self) -> "LaurentSeries":
        """d/dt; the known order drops by one."""
        if self.poly.is_zero():
            return LaurentSeries(self.known, fmpq_poly(), self.known - 1)
        # t^val * p(t)  ->  t^(val-1) * (val p + t p')
        p = self.poly
        q = p * self.val + (p.derivative().left_shift(1))
        return LaurentSeries(self.val - 1, q, self.known - 1)

    def mul_rational_t(self, num: fmpq_poly, den: fmpq_poly) -> "LaurentSeries":
        """Multiply by num(t)/den(t); den may vanish at t = 0 (Laurent)."""
        a = _poly_valuation(den)
        if a < 0:
            raise ZeroDivisionError("zero denominator")
        u = den.right_shift(a) if a else den
        s = self.mul_poly(num)
        n = max(s.known - s.val + 1, 1)
        inv = _inv_series(u, n)
        s = LaurentSeries(s.val, s.poly.mul_low(inv, n), s.known)
        return s.shift_t(-a)

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self - other).is_zero()

    def agrees_with(self, other: "LaurentSeries") -> bool:
        """Agreement on the common known window."""
        return (self - other).is_zero()

    def __repr__(self):
        terms = [f"{c}*t^{e}" for e, c in zip(range(self.val, self.known + 1), self.coeff_list()) if c]
        return (" + ".join(terms) or "0") + f" + O(t^{self.known + 1})"


def _inv_series(u: fmpq_poly, n: int) -> fmpq_poly:
    """1/u mod t^n for u(0) != 0, by Newton iteration."""
    c0 = u[0]
    if c0 == 0:
        raise ZeroDivisionError("series inverse needs a nonzero constant term")
    g = fmpq_poly([1 / c0])
    k = 1
    two = fmpq_poly([2])
    while k < n:
        k = min(2 * k, n)
        g = g.mul_low(two - u.mul_low(g, k), k)
    return g.truncate(n)


def z_to_t(r) -> tuple[fmpq_poly, fmpq_poly]:
    """Numerator and denominator of r(z) rewritten with z = 1 - 2t."""
    sub = fmpq_poly([1, -2])
    if isinstance(r, Poly):
        return r._p(sub), fmpq_poly([1])
    return r.num._p(sub), r.den._p(sub)


def apply_z(G: DiffOpZ, ser: LaurentSeries) -> LaurentSeries:
    """G(z, ∂_z) applied to a series in t, using ∂_z = -(1/2) ∂_t."""
    acc = None
    deriv = ser
    top = G.order
    half = fmpq(-1, 2)
    for d in range(0, top + 1):
        if d:
            deriv = deriv.d_t().scale(half)
        c = G.coeffs.get(d)
        if c is None:
            continue
        num, den = z_to_t(c)
        if den.degree() == 0:
            term = deriv.mul_poly(num * (1 / den[0]))
        else:
            term = deriv.mul_rational_t(num, den)
        acc = term if acc is None else acc + term
    if acc is None:
        return LaurentSeries(ser.known + 1, fmpq_poly(), ser.known)
    return acc


class SeriesFamily:
    """n -> LaurentSeries with a thread-safe idempotent memo."""

    def __init__(self, producer: Callable[[int], LaurentSeries], order: int, label: str = ""):
        self._producer = producer
        self.order = order
        self.label = label
        self._memo: dict[int, LaurentSeries] = {}
        self._lock = threading.Lock()

    def __call__(self, n: int) -> LaurentSeries:
        with self._lock:
            hit = self._memo.get(n)
        if hit is not None:
            return hit
        val = self._producer(n)
        with self._lock:
            return self._memo.setdefault(n, val)

    def precompute(self, window) -> None:
        for n in window:
            self(n)


def hyp_family(params: ParamSet, N: int, tilde: bool = False) -> SeriesFamily:
    """n -> p_ε^{α,β}(n, z) through t^N; ``tilde`` divides by the gauge φ(n)."""
    from .jacobi import gamma_ratio_eval, p_series_coeffs_at

    def prod(n: int) -> LaurentSeries:
        v, cs = p_series_coeffs_at(params, n, N)
        ser = LaurentSeries.from_coeffs(v, cs, known=N)
        if tilde:
            ser = ser.scale(1 / gamma_ratio_eval(params.eps + 1, params.alpha, n))
        return ser

    return SeriesFamily(prod, N, "p~" if tilde else "p")


def apply_n(D: DiffOp, fam: SeriesFamily, n0: int) -> LaurentSeries:
    """sum_j c_j(n0) fam(n0 + j)."""
    acc = None
    for j, c in sorted(D.coeffs.items()):
        term = fam(n0 + j).scale(c(n0))
        acc = term if acc is None else acc + term
    if acc is None:
        N = fam.order
        return LaurentSeries(N + 1, fmpq_poly(), N)
    return acc


def psi_family(bundle, params: ParamSet, N: int) -> SeriesFamily:
    """Ψ(n, z) = P(n, T) p_ε^{α,β}(n, z) for a Darboux bundle."""
    base = hyp_family(params, N)
    P = bundle.P
    return SeriesFamily(lambda n: apply_n(P, base, n), N, "Psi")


class EigenReport:
    """Per-n outcome of a differential eigen-check."""

    def __init__(self):
        self.rows: list[dict] = []

    @property
    def ok(self) -> bool:
        return bool(self.rows) and all(r["status"] == "ok" for r in self.rows)

    @property
    def verified_order(self) -> int:
        return min((r["known_through"] for r in self.rows), default=-1)

    def failures(self) -> list[dict]:
        return [r for r in self.rows if r["status"] != "ok"]

    def to_json(self) -> dict:
        return {"ok": self.ok, "verified_order": self.verified_order, "points": self.rows}

    def __repr__(self):
        return f"EigenReport(ok={self.ok}, verified_order={self.verified_order}, points={len(self.rows)})"


def _eigen_value(eigen, params: ParamSet, n: int, s: int) -> Fraction:
    from .jacobi import lambda_fn

    lam = lambda_fn(params)(n - s)
    if isinstance(eigen, (Poly, RatFunc)):
        return eigen(lam)
    return to_rat(eigen)


def verify_eigen_z(
    B: DiffOpZ,
    eigen,
    s: int,
    fam: SeriesFamily,
    window,
    N: int,
    params: ParamSet | None = None,
    min_terms: int = 1,
) -> EigenReport:
    """Residual B fam(n) - eigen(λ_ε(n-s)) fam(n) for each n in ``window``.

    A point passes when the residual is zero through exponent N and at least
    ``min_terms`` coefficients were actually checked.
    """
    if params is None:
        raise ValueError("params are needed to evaluate the eigenvalue")
    rep = EigenReport()
    for n in window:
        f = fam(n)
        lhs = apply_z(B, f)
        res = lhs - f.scale(_eigen_value(eigen, params, n, s))
        known = res.known
        row = {"n": n, "known_through": known, "checked_from": min(lhs.val, f.val)}
        nz = res.first_nonzero()
        if nz is not None:
            row.update(status="nonzero", first_failing_exponent=nz)
        elif known < N or known - row["checked_from"] + 1 < min_terms:
            row.update(status="insufficient-precision")
        else:
            row.update(status="ok")
        rep.rows.append(row)
    return rep
