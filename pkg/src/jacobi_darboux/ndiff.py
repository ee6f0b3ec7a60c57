"""Difference operators sum_j c_j(n) T^j with coefficients in Q(n)[sigma].

``sigma`` stands for the sign sequence (-1)^n.  It is carried as an even/odd
pair so that sigma^2 = 1 and T sigma = -sigma T hold structurally.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .errors import DegenerateKernelError, NotDivisibleError, VerificationError
from .exact import Poly, RatFunc, integer_roots, involute_subst
from .params import ParamSet

__all__ = [
    "SignedRatFunc",
    "DiffOp",
    "compose",
    "apply",
    "involution_I",
    "conjugate",
    "commutator",
    "ad",
    "is_regular",
    "right_divide",
    "darboux_solve",
    "from_kernel",
    "casoratian_minors",
    "poly_of_operator",
]

_ZERO = RatFunc.const(0)
_ONE = RatFunc.const(1)


def _rf(x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, Poly):
        return RatFunc(x)
    return RatFunc.const(x)


class SignedRatFunc:
    """even(n) + odd(n) * sigma, sigma = (-1)^n."""

    __slots__ = ("even", "odd")

    def __init__(self, even=0, odd=0):
        self.even = _rf(even)
        self.odd = _rf(odd)

    @classmethod
    def sigma(cls) -> "SignedRatFunc":
        return cls(_ZERO, _ONE)

    @staticmethod
    def coerce(x) -> "SignedRatFunc":
        if isinstance(x, SignedRatFunc):
            return x
        return SignedRatFunc(x, _ZERO)

    def is_zero(self) -> bool:
        return self.even.is_zero() and self.odd.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def is_sigma_free(self) -> bool:
        return self.odd.is_zero()

    def branches(self) -> tuple[RatFunc, RatFunc]:
        """The rational functions that agree with self on even n and on odd n."""
        if self.odd.is_zero():
            return self.even, self.even
        return self.even + self.odd, self.even - self.odd

    def __add__(self, other):
        o = SignedRatFunc.coerce(other)
        return SignedRatFunc(self.even + o.even, self.odd + o.odd)

    __radd__ = __add__

    def __neg__(self):
        return SignedRatFunc(-self.even, -self.odd)

    def __sub__(self, other):
        return self + (-SignedRatFunc.coerce(other))

    def __rsub__(self, other):
        return SignedRatFunc.coerce(other) - self

    def __mul__(self, other):
        o = SignedRatFunc.coerce(other)
        if self.odd.is_zero() and o.odd.is_zero():
            return SignedRatFunc(self.even * o.even, _ZERO)
        return SignedRatFunc(
            self.even * o.even + self.odd * o.odd, self.even * o.odd + self.odd * o.even
        )

    __rmul__ = __mul__

    def inverse(self) -> "SignedRatFunc":
        if self.odd.is_zero():
            return SignedRatFunc(self.even.inverse(), _ZERO)
        norm = self.even * self.even - self.odd * self.odd
        if norm.is_zero():
            raise ZeroDivisionError(f"{self} is a zero divisor")
        inv = norm.inverse()
        return SignedRatFunc(self.even * inv, -self.odd * inv)

    def __truediv__(self, other):
        return self * SignedRatFunc.coerce(other).inverse()

    def __rtruediv__(self, other):
        return SignedRatFunc.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = SignedRatFunc(_ONE)
        for _ in range(k):
            out = out * self
        return out

    def shift(self, d: int) -> "SignedRatFunc":
        """f(n + d); sigma picks up (-1)^d."""
        if d == 0:
            return self
        odd = self.odd.shift(d)
        return SignedRatFunc(self.even.shift(d), odd if d % 2 == 0 else -odd)

    def __call__(self, n: int) -> Fraction:
        v = self.even(n)
        if not self.odd.is_zero():
            o = self.odd(n)
            v = v + o if n % 2 == 0 else v - o
        return v

    def __eq__(self, other):
        try:
            o = SignedRatFunc.coerce(other)
        except TypeError:
            return NotImplemented
        return self.even == o.even and self.odd == o.odd

    def __hash__(self):
        return hash((self.even, self.odd))

    def __repr__(self):
        if self.odd.is_zero():
            return repr(self.even)
        if self.even.is_zero():
            return f"({self.odd!r})*sigma"
        return f"{self.even!r} + ({self.odd!r})*sigma"


_S_ONE = SignedRatFunc(_ONE)


class DiffOp:
    """Finite sum of c_j(n) T^j.  Zero coefficients are never stored."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        out = {}
        for j, c in (coeffs or {}).items():
            c = SignedRatFunc.coerce(c)
            if not c.is_zero():
                out[int(j)] = c
        self.coeffs = out

    @classmethod
    def identity(cls) -> "DiffOp":
        return cls({0: _S_ONE})

    @classmethod
    def zero(cls) -> "DiffOp":
        return cls({})

    @classmethod
    def T(cls, j: int = 1) -> "DiffOp":
        return cls({j: _S_ONE})

    @classmethod
    def scalar(cls, f) -> "DiffOp":
        return cls({0: f})

    @property
    def support(self) -> tuple[int, int] | None:
        if not self.coeffs:
            return None
        return min(self.coeffs), max(self.coeffs)

    def coeff(self, j: int) -> SignedRatFunc:
        return self.coeffs.get(j, SignedRatFunc())

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_sigma_free(self) -> bool:
        return all(c.is_sigma_free() for c in self.coeffs.values())

    def __add__(self, other):
        o = _as_op(other)
        out = dict(self.coeffs)
        for j, c in o.coeffs.items():
            out[j] = out[j] + c if j in out else c
        return DiffOp(out)

    __radd__ = __add__

    def __neg__(self):
        return DiffOp({j: -c for j, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-_as_op(other))

    def __rsub__(self, other):
        return _as_op(other) - self

    def __mul__(self, other):
        """Left multiplication by a scalar function, or composition with a DiffOp."""
        if isinstance(other, DiffOp):
            return compose(self, other)
        f = SignedRatFunc.coerce(other)
        return DiffOp({j: c * f.shift(j) for j, c in self.coeffs.items()})

    def __rmul__(self, other):
        f = SignedRatFunc.coerce(other)
        return DiffOp({j: f * c for j, c in self.coeffs.items()})

    def __matmul__(self, other):
        return compose(self, _as_op(other))

    def __pow__(self, k: int):
        out = DiffOp.identity()
        for _ in range(k):
            out = compose(out, self)
        return out

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            try:
                other = _as_op(other)
            except TypeError:
                return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items(), key=lambda t: t[0])))

    def map_coeffs(self, fn) -> "DiffOp":
        return DiffOp({j: fn(j, c) for j, c in self.coeffs.items()})

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for j in sorted(self.coeffs, reverse=True):
            t = "" if j == 0 else ("T" if j == 1 else f"T^{j}")
            parts.append(f"[{self.coeffs[j]!r}]{t}")
        return " + ".join(parts)


def _as_op(x) -> DiffOp:
    if isinstance(x, DiffOp):
        return x
    return DiffOp.scalar(x)


def compose(D1: DiffOp, D2: DiffOp) -> DiffOp:
    """D1 o D2 using T f(n) = f(n+1) T and T sigma = -sigma T."""
    out: dict[int, SignedRatFunc] = {}
    for i, a in D1.coeffs.items():
        for j, b in D2.coeffs.items():
            term = a * b.shift(i)
            k = i + j
            out[k] = out[k] + term if k in out else term
    return DiffOp(out)


def apply(D: DiffOp, f) -> SignedRatFunc:
    """(D f)(n) = sum_j c_j(n) f(n+j)."""
    f = SignedRatFunc.coerce(f)
    acc = SignedRatFunc()
    for j, c in D.coeffs.items():
        acc = acc + c * f.shift(j)
    return acc


def poly_of_operator(q: Poly, L: DiffOp) -> DiffOp:
    """q(L) by Horner's rule."""
    cs = q.coeffs
    out = DiffOp.zero()
    for c in reversed(cs):
        out = compose(out, L) + DiffOp.scalar(c)
    return out


def involution_I(D: DiffOp, params: ParamSet) -> DiffOp:
    """The algebra map n -> -(n + 2 eps + alpha + beta + 1), T -> T^{-1}."""
    if not D.is_sigma_free():
        raise ValueError("the involution is not defined on operators carrying (-1)^n")
    return DiffOp({-j: SignedRatFunc(involute_subst(c.even, params)) for j, c in D.coeffs.items()})


def conjugate(D: DiffOp, g) -> DiffOp:
    """g D g^{-1}."""
    g = SignedRatFunc.coerce(g)
    ginv = g.inverse()
    return DiffOp({j: g * c * ginv.shift(j) for j, c in D.coeffs.items()})


def commutator(D1: DiffOp, D2: DiffOp) -> DiffOp:
    """D1 D2 - D2 D1."""
    return compose(D1, D2) - compose(D2, D1)


def ad(X: DiffOp, Y: DiffOp) -> DiffOp:
    """ad_X(Y) = X Y - Y X."""
    return commutator(X, Y)


# -- regularity ---------------------------------------------------------------


def _parity_roots(r: Poly, parity: int) -> list[int]:
    if r.is_zero():
        return []
    return sorted(m for m in integer_roots(r) if m % 2 == parity)


def is_regular(D: DiffOp) -> tuple[bool, tuple[int, int] | None]:
    """(True, None) or (False, (n, shift)) for the first integer pole or end zero found."""
    if D.is_zero():
        return False, None
    p, q = D.support
    for j in sorted(D.coeffs):
        c = D.coeffs[j]
        for parity, branch in enumerate(c.branches()):
            poles = _parity_roots(branch.den, parity)
            if poles:
                return False, (poles[0], j)
            if j in (p, q):
                if branch.is_zero():
                    return False, (parity, j)
                zeros = _parity_roots(branch.num, parity)
                if zeros:
                    return False, (zeros[0], j)
    return True, None


# -- division -------------------------------------------------------------------


def right_divide(D: DiffOp, P: DiffOp, verify: bool = True) -> DiffOp:
    """Q with Q o P = D; NotDivisibleError if no such Q exists."""
    if P.is_zero():
        raise ZeroDivisionError("right division by the zero operator")
    if D.is_zero():
        return DiffOp.zero()
    p0, p1 = P.support
    d0, d1 = D.support
    if d1 - d0 < p1 - p0:
        raise NotDivisibleError("dividend support is shorter than the divisor's", remainder=D)
    lead = P.coeffs[p1]
    rem = dict(D.coeffs)
    q: dict[int, SignedRatFunc] = {}
    for i in range(d1 - p1, d0 - p0 - 1, -1):
        top = rem.get(i + p1)
        if top is None or top.is_zero():
            continue
        qi = top / lead.shift(i)
        q[i] = qi
        for j, c in P.coeffs.items():
            k = i + j
            t = qi * c.shift(i)
            rem[k] = rem[k] - t if k in rem else -t
        rem.pop(i + p1, None)
    rest = DiffOp(rem)
    if not rest.is_zero():
        raise NotDivisibleError("operator is not right-divisible", remainder=rest)
    Q = DiffOp(q)
    if verify and compose(Q, P) != D:
        raise VerificationError("right division failed re-multiplication check")
    return Q


def darboux_solve(P: DiffOp, L0: DiffOp) -> DiffOp:
    """The unique L with L o P = P o L0."""
    return right_divide(compose(P, L0), P)


# -- kernels ----------------------------------------------------------------------


def _subset_dets(rows: list[list[SignedRatFunc]], ncols: int) -> dict[frozenset, SignedRatFunc]:
    """Determinants of the leading |S| rows restricted to column subsets S.

    Built by expansion along the last row, so every m-subset minor of an
    m x (m+1) matrix comes out of one pass.
    """
    from itertools import combinations

    m = len(rows)
    dets: dict[frozenset, SignedRatFunc] = {frozenset(): SignedRatFunc(_ONE)}
    for r in range(1, m + 1):
        row = rows[r - 1]
        nxt = {}
        for S in combinations(range(ncols), r):
            acc = SignedRatFunc()
            for pos, c in enumerate(S):
                a = row[c]
                if a.is_zero():
                    continue
                sub = dets.get(frozenset(S[:pos] + S[pos + 1:]))
                if sub is None or sub.is_zero():
                    continue
                term = a * sub
                acc = acc + term if (pos + r - 1) % 2 == 0 else acc - term
            nxt[frozenset(S)] = acc
        dets = nxt
    return dets


def casoratian_minors(basis: list, shifts: list[int]) -> list[SignedRatFunc]:
    """Minors of the matrix f_i(n + shifts[c]); entry r omits column r."""
    basis = [SignedRatFunc.coerce(f) for f in basis]
    m = len(basis)
    if len(shifts) != m + 1:
        raise ValueError("need exactly one more shift than basis functions")
    rows = [[f.shift(s) for s in shifts] for f in basis]
    dets = _subset_dets(rows, m + 1)
    full = frozenset(range(m + 1))
    return [dets[full - {r}] for r in range(m + 1)]


def from_kernel(basis: list, support: tuple[int, int], return_minors: bool = False):
    """The operator with the given support, coefficient 1 at the top shift, killing ``basis``.

    The bordered determinant with rows f_i(n+j) and a last row of T^j is
    expanded along that last row.
    """
    p, q = support
    basis = [SignedRatFunc.coerce(f) for f in basis]
    m = len(basis)
    if q - p != m:
        raise ValueError(f"support {support} needs {q - p} basis functions, got {m}")
    shifts = list(range(p, q + 1))
    minors = casoratian_minors(basis, shifts)
    lead = minors[m]  # omit the top column
    _check_nondegenerate(lead)
    # expansion along the last row: coefficient of T^{shifts[r]} is (-1)^{m+r} minors[r]
    lead_sign = 1  # (-1)^{m+m}
    coeffs = {}
    inv = lead.inverse()
    for r in range(m + 1):
        sgn = 1 if (m + r) % 2 == 0 else -1
        c = minors[r] * inv
        coeffs[shifts[r]] = c if sgn == lead_sign else -c
    P = DiffOp(coeffs)
    for f in basis:
        if not apply(P, f).is_zero():
            raise VerificationError("constructed operator does not annihilate its kernel")
    if return_minors:
        return P, minors
    return P


def _check_nondegenerate(det: SignedRatFunc):
    if det.is_zero():
        raise DegenerateKernelError("Casoratian vanishes identically", witness=None)
    for parity, branch in enumerate(det.branches()):
        if branch.is_zero():
            raise DegenerateKernelError(
                f"Casoratian vanishes on every {'odd' if parity else 'even'} integer", witness=parity
            )
        zs = _parity_roots(branch.num, parity) + _parity_roots(branch.den, parity)
        if zs:
            raise DegenerateKernelError(f"Casoratian degenerates at n = {zs[0]}", witness=zs[0])
