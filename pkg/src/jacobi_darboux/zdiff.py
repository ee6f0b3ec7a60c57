"""Differential operators in z and the free algebra on the letters Λ and M.

A word in Λ, M is read two ways.  On the difference side Λ is multiplication
by the eigenvalue λ_ε(n) and M is the gauged Jacobi operator; the map is a
homomorphism.  On the differential side Λ goes to the hypergeometric operator
B_{α,β} and M to multiplication by z, and the map reverses word order.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Mapping

from .exact import Poly, RatFunc
from .params import ParamSet, to_rat

__all__ = [
    "DiffOpZ",
    "compose_z",
    "FreeElem",
    "LAMBDA",
    "MULT",
    "free_mul",
    "free_add",
    "free_commutator",
    "eval_to_diffn",
    "eval_to_diffz_b",
]

LAMBDA = "Λ"
MULT = "M"


def _rz(x) -> RatFunc:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, Poly):
        return RatFunc(x.with_var("z"))
    return RatFunc.const(x, "z")


class DiffOpZ:
    """sum_d c_d(z) ∂_z^d with rational c_d."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, object] | None = None):
        out = {}
        for d, c in (coeffs or {}).items():
            if d < 0:
                raise ValueError("negative derivative order")
            c = _rz(c)
            if not c.is_zero():
                out[int(d)] = c
        self.coeffs = out

    @classmethod
    def identity(cls) -> "DiffOpZ":
        return cls({0: 1})

    @classmethod
    def mult(cls, f) -> "DiffOpZ":
        return cls({0: f})

    @classmethod
    def z(cls) -> "DiffOpZ":
        return cls({0: Poly([0, 1], "z")})

    @classmethod
    def d(cls, k: int = 1) -> "DiffOpZ":
        return cls({k: 1})

    @property
    def order(self) -> int:
        return max(self.coeffs) if self.coeffs else -1

    def coeff(self, d: int) -> RatFunc:
        return self.coeffs.get(d, RatFunc.const(0, "z"))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        o = _as_opz(other)
        out = dict(self.coeffs)
        for d, c in o.coeffs.items():
            out[d] = out[d] + c if d in out else c
        return DiffOpZ(out)

    __radd__ = __add__

    def __neg__(self):
        return DiffOpZ({d: -c for d, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-_as_opz(other))

    def __rsub__(self, other):
        return _as_opz(other) - self

    def __mul__(self, other):
        if isinstance(other, DiffOpZ):
            return compose_z(self, other)
        return compose_z(self, DiffOpZ.mult(other))

    def __rmul__(self, other):
        f = _rz(other)
        return DiffOpZ({d: f * c for d, c in self.coeffs.items()})

    def __matmul__(self, other):
        return compose_z(self, _as_opz(other))

    def __pow__(self, k: int):
        out = DiffOpZ.identity()
        for _ in range(k):
            out = compose_z(out, self)
        return out

    def __eq__(self, other):
        if not isinstance(other, DiffOpZ):
            try:
                other = _as_opz(other)
            except TypeError:
                return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items(), key=lambda t: t[0])))

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for d in sorted(self.coeffs, reverse=True):
            t = "" if d == 0 else ("∂" if d == 1 else f"∂^{d}")
            parts.append(f"[{self.coeffs[d]!r}]{t}")
        return " + ".join(parts)


def _as_opz(x) -> DiffOpZ:
    if isinstance(x, DiffOpZ):
        return x
    return DiffOpZ.mult(x)


def compose_z(G1: DiffOpZ, G2: DiffOpZ) -> DiffOpZ:
    """G1 ∘ G2 by Leibniz: ∂^i b = sum_k C(i,k) b^(k) ∂^(i-k)."""
    out: dict[int, RatFunc] = {}
    # derivatives of each coefficient of G2, computed lazily and reused
    derivs: dict[int, list[RatFunc]] = {j: [b] for j, b in G2.coeffs.items()}
    top = max(G1.coeffs) if G1.coeffs else 0
    for j, ds in derivs.items():
        while len(ds) <= top and not ds[-1].is_zero():
            ds.append(ds[-1].derivative())
    for i, a in G1.coeffs.items():
        for j, ds in derivs.items():
            for k in range(0, i + 1):
                if k >= len(ds) or ds[k].is_zero():
                    break
                term = a * ds[k]
                if k:
                    term = term * comb(i, k)
                o = i + j - k
                out[o] = out[o] + term if o in out else term
    return DiffOpZ(out)


# -- free algebra -------------------------------------------------------------------


class FreeElem:
    """Linear combination of words over {Λ, M} with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[str, object] | None = None):
        out = {}
        for w, c in (terms or {}).items():
            if any(ch not in (LAMBDA, MULT) for ch in w):
                raise ValueError(f"word {w!r} uses letters outside Λ, M")
            c = to_rat(c)
            if c:
                out[w] = out.get(w, Fraction(0)) + c
                if not out[w]:
                    del out[w]
        self.terms = out

    @classmethod
    def word(cls, w: str, c=1) -> "FreeElem":
        return cls({w: c})

    @classmethod
    def one(cls) -> "FreeElem":
        return cls({"": 1})

    @classmethod
    def scalar(cls, c) -> "FreeElem":
        return cls({"": c})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        return free_add(self, _as_free(other))

    __radd__ = __add__

    def __neg__(self):
        return FreeElem({w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return free_add(self, -_as_free(other))

    def __rsub__(self, other):
        return free_add(_as_free(other), -self)

    def __mul__(self, other):
        return free_mul(self, _as_free(other))

    def __rmul__(self, other):
        return free_mul(_as_free(other), self)

    def __pow__(self, k: int):
        out = FreeElem.one()
        for _ in range(k):
            out = free_mul(out, self)
        return out

    def __eq__(self, other):
        if not isinstance(other, FreeElem):
            try:
                other = _as_free(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted(self.terms.items())))

    def max_lambda_count(self) -> int:
        return max((w.count(LAMBDA) for w in self.terms), default=0)

    def letters(self) -> set[str]:
        return {ch for w in self.terms for ch in w}

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{w or '1'}" for w, c in sorted(self.terms.items()))


def _as_free(x) -> FreeElem:
    if isinstance(x, FreeElem):
        return x
    return FreeElem.scalar(to_rat(x))


def free_add(a: FreeElem, b: FreeElem) -> FreeElem:
    out = dict(a.terms)
    for w, c in b.terms.items():
        out[w] = out.get(w, Fraction(0)) + c
    return FreeElem({w: c for w, c in out.items() if c})


def free_mul(a: FreeElem, b: FreeElem) -> FreeElem:
    out: dict[str, Fraction] = {}
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            w = w1 + w2
            out[w] = out.get(w, Fraction(0)) + c1 * c2
    return FreeElem({w: c for w, c in out.items() if c})


def free_commutator(a: FreeElem, b: FreeElem) -> FreeElem:
    return free_mul(a, b) - free_mul(b, a)


# -- evaluation maps ----------------------------------------------------------------


def _trie(terms: Mapping[str, Fraction], from_front: bool):
    """Split a word sum into (constant, {letter: rest-sum}) by first or last letter."""
    const = Fraction(0)
    groups: dict[str, dict[str, Fraction]] = {}
    for w, c in terms.items():
        if not w:
            const += c
            continue
        if from_front:
            letter, rest = w[0], w[1:]
        else:
            letter, rest = w[-1], w[:-1]
        g = groups.setdefault(letter, {})
        g[rest] = g.get(rest, Fraction(0)) + c
    return const, groups


def eval_to_diffn(w: FreeElem, params: ParamSet):
    """Homomorphism Λ -> λ_ε(n), M -> the gauged Jacobi operator."""
    from .jacobi import jacobi_L_tilde, lambda_fn
    from .ndiff import DiffOp, compose

    images = {LAMBDA: DiffOp.scalar(lambda_fn(params)), MULT: jacobi_L_tilde(params)}

    def rec(terms):
        const, groups = _trie(terms, from_front=True)
        acc = DiffOp.scalar(const) if const else DiffOp.zero()
        for letter, rest in groups.items():
            img = images[letter]
            sub = rec(rest)
            if letter == LAMBDA:
                acc = acc + DiffOp({j: img.coeffs[0] * c for j, c in sub.coeffs.items()})
            else:
                acc = acc + compose(img, sub)
        return acc

    return rec(w.terms)


def eval_to_diffz_b(w: FreeElem, params: ParamSet) -> DiffOpZ:
    """Anti-homomorphism Λ -> B_{α,β}, M -> z: s1...sm maps to b(sm)∘...∘b(s1)."""
    from .jacobi import B_op

    images = {LAMBDA: B_op(params.alpha, params.beta), MULT: DiffOpZ.z()}

    def rec(terms):
        # b(s1 rest) = b(rest) ∘ b(s1)
        const, groups = _trie(terms, from_front=True)
        acc = DiffOpZ.mult(const) if const else DiffOpZ()
        for letter, rest in groups.items():
            acc = acc + compose_z(rec(rest), images[letter])
        return acc

    return rec(w.terms)
