"""Involution-invariant operators, their decomposition into λ/L̃ words, and dual operators.

An operator X fixed by the involution is peeled one order at a time.  With
W = ad_λ(ad_λ + 1) L̃, the top coefficient of W^d is known in closed form and
ad_λ acts on the T^d part as multiplication by a linear function of n.  So a
polynomial in ad_λ applied to W^d can match any prescribed top coefficient up
to a denominator that is a polynomial in λ.  Subtracting leaves an invariant
operator of lower order; the bottom is a rational function of λ.

Words are kept in a structured form (outer polynomial in Λ, polynomial in
ad_Λ, power of W) so both evaluation maps stay cheap: on the differential
side b(ad_Λ Y) = -ad_B b(Y).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .darboux import DarbouxBundle, auto_lift, build_P_bar, eigen_poly
from .errors import NotInvariantError, ScopeError, VerificationError
from .exact import Poly, RatFunc, involute_subst, rewrite_in_lambda
from .jacobi import B_op, jacobi_L_tilde, lambda_fn, phi_fn
from .ndiff import (
    DiffOp,
    compose,
    conjugate,
    involution_I,
    is_regular,
    poly_of_operator,
    right_divide,
)
from .params import ParamSet, is_integer
from .series import psi_family, verify_eigen_z
from .zdiff import LAMBDA, MULT, DiffOpZ, FreeElem, compose_z, free_mul

__all__ = [
    "check_R_membership",
    "Decomposition",
    "decompose_left",
    "decompose_right",
    "DualCertificate",
    "build_dual",
    "verify_ino",
    "poly_in_B",
]

LEFT, RIGHT = "left", "right"


def check_R_membership(M: DiffOp, params: ParamSet) -> tuple[bool, object]:
    """Whether φ^{-1} M φ is fixed by the involution and M has no poles on the integers."""
    if not is_integer(params.alpha):
        raise ScopeError("membership test needs integer alpha so that the gauge is rational")
    if not M.is_sigma_free():
        return False, "carries (-1)^n"
    for j, c in M.coeffs.items():
        ok, wit = is_regular(DiffOp({0: c}))
        if not ok and wit is not None and c.even.den.degree > 0:
            # is_regular on a single coefficient reports both poles and zeros; keep poles only
            from .exact import integer_roots

            poles = sorted(integer_roots(c.even.den))
            if poles:
                return False, ("pole", poles[0], j)
    phi = phi_fn(params.alpha, params.eps)
    Mt = conjugate(M, phi.inverse())
    IM = involution_I(Mt, params)
    if IM != Mt:
        return False, ("not invariant", Mt - IM)
    return True, None


# -- structured words ---------------------------------------------------------------


@dataclass(frozen=True)
class _Term:
    """outer(Λ) · p(ad_Λ)(Y) on the left side, p(ad_Λ)(Y) · outer(Λ) on the right.

    Y is W^d, or M^d when ``base == "M"``.  ``d = 0`` with ``adpoly = None``
    is a pure polynomial outer(Λ).
    """

    d: int
    adpoly: Poly | None
    outer: Poly
    base: str = "W"


def _poly_compose_linear(p: Poly, a, b) -> Poly:
    """p(a*y + b) as a polynomial in y."""
    return Poly._wrap(p._p(Poly.linear(a, b, "y")._p), "y")


def _delta_poly(params: ParamSet, j: int) -> Poly:
    """λ(n) - λ(n+j) = -j(2n + 2ε + α + β + j + 1)."""
    s = params.shift_sum
    return Poly.linear(-2 * j, -j * (s + j + 1))


def _c_poly(params: ParamSet, d: int) -> Poly:
    e, a, b = params.eps, params.alpha, params.beta
    out = Poly.const(2 ** d)
    for i in range(1, d + 1):
        out = out * Poly.linear(1, e + a + i) * Poly.linear(1, e + a + b + i)
    return out


def _ad_poly_on(op: DiffOp, p: Poly, params: ParamSet) -> DiffOp:
    """p(ad_λ) applied to a difference operator: T^j coefficients get p(δ_j(n))."""
    out = {}
    for j, c in op.coeffs.items():
        mult = p(_delta_poly(params, j).with_var("y")) if j else Poly.const(p(0))
        out[j] = c * RatFunc(mult.with_var("n"))
    return DiffOp(out)


def _lambda_poly_values(poly: Poly, params: ParamSet) -> RatFunc:
    """poly(λ_ε(n)) as a function of n."""
    lam = lambda_fn(params).num
    return RatFunc(poly(lam))


def poly_in_B(poly: Poly, params: ParamSet) -> DiffOpZ:
    """poly(B_{α,β}) by Horner's rule."""
    B = B_op(params.alpha, params.beta)
    out = DiffOpZ()
    for c in reversed(poly.coeffs):
        out = compose_z(out, B) + DiffOpZ.mult(c)
    return out


class _Engine:
    """Cached building blocks for one parameter set."""

    def __init__(self, params: ParamSet):
        self.params = params
        Lt = jacobi_L_tilde(params)
        self.W = _ad_poly_on(Lt, Poly([0, 1, 1], "y"), params)  # ad(ad+1) L̃
        self._Wpow = {0: DiffOp.identity(), 1: self.W}
        self._Mpow = {0: DiffOp.identity(), 1: Lt}
        self._bW = None
        self._bWpow = {}

    def Mpow(self, d: int) -> DiffOp:
        if d not in self._Mpow:
            self._Mpow[d] = compose(self.Mpow(d - 1), self._Mpow[1])
        return self._Mpow[d]

    def pow(self, base: str, d: int) -> DiffOp:
        return self.Wpow(d) if base == "W" else self.Mpow(d)

    def bpow(self, base: str, d: int) -> DiffOpZ:
        if base == "W":
            return self.bWpow(d)
        return DiffOpZ.mult(Poly.gen("z") ** d)

    def Wpow(self, d: int) -> DiffOp:
        if d not in self._Wpow:
            self._Wpow[d] = compose(self.Wpow(d - 1), self.W)
        return self._Wpow[d]

    def bW(self) -> DiffOpZ:
        # b(ad_Λ Y) = -ad_B b(Y); b(M) = z; b((ad^2 + ad) M) = ad_B^2 z - ad_B z
        if self._bW is None:
            B = B_op(self.params.alpha, self.params.beta)
            z = DiffOpZ.z()
            adz = compose_z(B, z) - compose_z(z, B)
            ad2z = compose_z(B, adz) - compose_z(adz, B)
            self._bW = ad2z - adz
        return self._bW

    def bWpow(self, d: int) -> DiffOpZ:
        if d == 0:
            return DiffOpZ.identity()
        if d not in self._bWpow:
            self._bWpow[d] = compose_z(self.bWpow(d - 1), self.bW()) if d > 1 else self.bW()
        return self._bWpow[d]


def _free_W() -> FreeElem:
    lam = FreeElem.word(LAMBDA)
    M = FreeElem.word(MULT)
    ad = lambda Y: free_mul(lam, Y) - free_mul(Y, lam)  # noqa: E731
    return ad(ad(M)) + ad(M)


def _free_ad_poly(p: Poly, Y: FreeElem) -> FreeElem:
    lam = FreeElem.word(LAMBDA)
    out = FreeElem()
    cur = Y
    for c in p.coeffs:
        if c:
            out = out + free_mul(FreeElem.scalar(c), cur)
        cur = free_mul(lam, cur) - free_mul(cur, lam)
    return out


def _free_lambda_poly(p: Poly) -> FreeElem:
    return FreeElem({LAMBDA * i: c for i, c in enumerate(p.coeffs) if c})


@dataclass
class Decomposition:
    """X = denom(λ)^{-1} eval(word) (left) or eval(word) denom(λ)^{-1} (right)."""

    denom: Poly
    side: str
    params: ParamSet
    terms: list = field(default_factory=list)

    @property
    def word(self) -> FreeElem:
        """The word sum expanded letter by letter (can be large)."""
        W = _free_W()
        out = FreeElem()
        for t in self.terms:
            outer = _free_lambda_poly(t.outer)
            if t.adpoly is None:
                out = out + outer
                continue
            Y = W ** t.d if t.base == "W" else FreeElem.word(MULT * t.d)
            core = _free_ad_poly(t.adpoly, Y)
            out = out + (free_mul(outer, core) if self.side == LEFT else free_mul(core, outer))
        return out

    def word_size(self) -> int:
        """Number of distinct words without expanding them."""
        return len(self.word.terms)

    def eval_n(self, engine: "_Engine | None" = None) -> DiffOp:
        """Difference-side image of the word sum."""
        eng = engine or _Engine(self.params)
        out = DiffOp.zero()
        for t in self.terms:
            outer = DiffOp.scalar(_lambda_poly_values(t.outer, self.params))
            if t.adpoly is None:
                out = out + outer
                continue
            core = _ad_poly_on(eng.pow(t.base, t.d), t.adpoly, self.params)
            out = out + (compose(outer, core) if self.side == LEFT else compose(core, outer))
        return out

    def eval_b(self, engine: "_Engine | None" = None) -> DiffOpZ:
        """Differential-side image under the order-reversing map Λ -> B, M -> z."""
        eng = engine or _Engine(self.params)
        B = B_op(self.params.alpha, self.params.beta)
        out = DiffOpZ()
        for t in self.terms:
            outer = poly_in_B(t.outer, self.params)
            if t.adpoly is None:
                out = out + outer
                continue
            # b(p(ad_Λ) Y) = p(-ad_B) b(Y)
            cur = eng.bpow(t.base, t.d)
            core = DiffOpZ()
            for c in t.adpoly.coeffs:
                if c:
                    core = core + DiffOpZ.mult(c) @ cur
                cur = compose_z(cur, B) - compose_z(B, cur)
            out = out + (compose_z(core, outer) if self.side == LEFT else compose_z(outer, core))
        return out

    def reconstruct(self, engine=None) -> DiffOp:
        inv = DiffOp.scalar(_lambda_poly_values(self.denom, self.params).inverse())
        body = self.eval_n(engine)
        return compose(inv, body) if self.side == LEFT else compose(body, inv)

    def lambda_only(self) -> bool:
        return all(t.adpoly is None for t in self.terms)


def _check_invariant(X: DiffOp, params: ParamSet):
    if not X.is_sigma_free():
        raise NotInvariantError("operator carries (-1)^n", witness=X)
    IX = involution_I(X, params)
    if IX != X:
        raise NotInvariantError("operator is not fixed by the involution", witness=X - IX)


def _direct_power(R: DiffOp, d: int, eng: "_Engine", params: ParamSet, side: str):
    """r with R - r(λ) L̃^d (left) or R - L̃^d r(λ) (right) of order < d, if r exists."""
    top = R.coeff(d).even / eng.Mpow(d).coeff(d).even
    if side == RIGHT:
        top = top.shift(-d)
    try:
        return rewrite_in_lambda(top, params)
    except NotInvariantError:
        return None


def _decompose(X: DiffOp, params: ParamSet, side: str, verify: bool = True) -> Decomposition:
    _check_invariant(X, params)
    eng = _Engine(params)
    lam = lambda_fn(params)
    raw = []  # (d, adpoly, base, numerator in x, q_d in x)
    R = X
    while not R.is_zero():
        lo, hi = R.support
        d = hi
        if lo != -d:
            raise VerificationError(f"invariant remainder has asymmetric support {R.support}")
        if d == 0:
            break
        r = _direct_power(R, d, eng, params, side)
        if r is not None:
            # the top coefficient is already a function of λ times that of L̃^d
            rn = DiffOp.scalar(RatFunc(r.num(lam.num), r.den(lam.num)))
            S = eng.Mpow(d)
            part = compose(rn, S) if side == LEFT else compose(S, rn)
            entry = (d, Poly.const(1, "y"), "M", r.num.with_var("x"), r.den.with_var("x"))
        else:
            top = R.coeff(d).even
            a_d, b_d = top.num, top.den
            c_d = _c_poly(params, d)
            if side == LEFT:
                m = a_d * involute_subst(b_d, params) * involute_subst(c_d, params)
                q_n = b_d * involute_subst(b_d, params) * c_d * involute_subst(c_d, params)
            else:
                e = (b_d * c_d).shift(-d)
                Ie = involute_subst(e, params)
                m = a_d * Ie.shift(d)
                q_n = e * Ie
            q_x = rewrite_in_lambda(RatFunc(q_n), params)
            if not q_x.is_poly():
                raise VerificationError("clearing factor is not a polynomial in λ")
            q_x = q_x.num
            p = _poly_compose_linear(m, Fraction(-1, 2 * d), -(params.shift_sum + d + 1) / 2)
            S = _ad_poly_on(eng.Wpow(d), p, params)
            qinv = DiffOp.scalar(RatFunc(q_x(lam.num)).inverse())
            part = compose(qinv, S) if side == LEFT else compose(S, qinv)
            entry = (d, p, "W", Poly.const(1, "x"), q_x.with_var("x"))
        Rn = R - part
        if not Rn.is_zero() and Rn.support[1] >= d:
            raise VerificationError(f"top order {d} did not cancel")
        raw.append(entry)
        R = Rn
    # base: a rational function of λ
    if R.is_zero():
        N, D = Poly.const(0, "x"), Poly.const(1, "x")
    else:
        rho = rewrite_in_lambda(R.coeff(0).even, params)
        N, D = rho.num, rho.den
    mu = D.with_var("x").monic()
    for *_, q_x in raw:
        mu = mu.lcm(q_x)
    terms = []
    for d, p, base, num, q_x in raw:
        terms.append(_Term(d, p, mu.exquo(q_x) * num, base))
    if not N.is_zero():
        terms.append(_Term(0, None, (mu.exquo(D.with_var("x")) * N.with_var("x"))))
    dec = Decomposition(mu, side, params, terms)
    if verify and dec.reconstruct(eng) != X:
        raise VerificationError(f"{side} decomposition does not reproduce its input")
    return dec


def decompose_left(X: DiffOp, params: ParamSet, verify: bool = True) -> Decomposition:
    """X = μ(λ)^{-1} eval(S) for an involution-invariant X."""
    return _decompose(X, params, LEFT, verify)


def decompose_right(X: DiffOp, params: ParamSet, verify: bool = True) -> Decomposition:
    """X = eval(S) ν(λ)^{-1} for an involution-invariant X."""
    return _decompose(X, params, RIGHT, verify)


# -- the dual operator -----------------------------------------------------------------


@dataclass
class DualCertificate:
    Bdual: DiffOpZ
    eigen: Poly
    s: int
    params: ParamSet  # λ in the eigenvalue is λ_ε for these parameters
    G_P: DiffOpZ | None = None
    G_Q: DiffOpZ | None = None
    mu: Poly | None = None
    nu: Poly | None = None
    qz: Poly | None = None
    verified_order: int = -1
    report: object = None
    lifted: bool = False


def _qz(k: int, l: int) -> Poly:
    return eigen_poly(k, l, "z")


def verify_ino(G_P: DiffOpZ, G_Q: DiffOpZ, mu: Poly, nu: Poly, q: Poly, params: ParamSet,
               order: str = "QP") -> tuple[bool, object]:
    """Compare b(ν) b(μ) with the composite of G_P, 1/q(z), G_Q.

    ``order="QP"`` checks G_Q ∘ q^{-1} ∘ G_P, the ordering forced by the
    anti-isomorphism; ``order="PQ"`` checks G_P ∘ q^{-1} ∘ G_Q.
    Returns (ok, witness) with the first differing derivative order.
    """
    lhs = poly_in_B(nu * mu, params)
    qinv = DiffOpZ.mult(RatFunc(Poly.const(1, "z"), q.with_var("z")))
    if order == "QP":
        rhs = compose_z(compose_z(G_Q, qinv), G_P)
    else:
        rhs = compose_z(compose_z(G_P, qinv), G_Q)
    diff = lhs - rhs
    if diff.is_zero():
        return True, None
    d = max(diff.coeffs)
    return False, (d, diff.coeffs[d])


def build_dual(bundle: DarbouxBundle, params: ParamSet | None = None, order: int = 48,
               window=range(-8, 9), check_ino: bool = True) -> DualCertificate:
    """Dual differential operator with Bdual Ψ = eigen(λ(n - s)) Ψ, verified on series."""
    from .errors import VerificationError as _VE

    spec = bundle.spec
    if params is not None and params != spec.params:
        raise ValueError("params disagree with the bundle")
    if spec.order == 0:
        cert = DualCertificate(DiffOpZ.identity(), Poly.const(1, "x"), 0, spec.params,
                               DiffOpZ.identity(), DiffOpZ.identity(), Poly.const(1, "x"),
                               Poly.const(1, "x"), Poly.const(1, "z"))
        _certify(cert, bundle, order, window)
        return cert
    work = auto_lift(bundle)
    wp = work.spec.params
    if not is_integer(wp.alpha):
        raise ScopeError("dual construction needs integer alpha (rational gauge)")
    pb = build_P_bar(work.spec)
    Lt = jacobi_L_tilde(wp)
    q = eigen_poly(work.spec.k, work.spec.l)
    Qbar = right_divide(poly_of_operator(q, Lt), pb.P_bar)
    eng = _Engine(wp)
    dl = decompose_left(pb.P_bar, wp)
    dr = decompose_right(Qbar, wp)
    G_P = dl.eval_b(eng)
    G_Q = dr.eval_b(eng)
    qz = _qz(work.spec.k, work.spec.l)
    qinv = DiffOpZ.mult(RatFunc(Poly.const(1, "z"), qz))
    Bdual = compose_z(compose_z(G_P, G_Q), qinv)
    cert = DualCertificate(Bdual, dl.denom * dr.denom, pb.s, wp, G_P, G_Q, dl.denom, dr.denom, qz,
                           lifted=work is not bundle)
    if check_ino:
        ok, wit = verify_ino(G_P, G_Q, dl.denom, dr.denom, qz, wp)
        if not ok:
            raise _VE(f"operator identity between the two factors failed at order {wit[0]}")
    _certify(cert, bundle, order, window)
    return cert


def _certify(cert: DualCertificate, bundle: DarbouxBundle, order: int, window) -> None:
    loss = max(cert.Bdual.order, 0) + (cert.qz.degree if cert.qz is not None else 0) + 2
    fam = psi_family(bundle, bundle.spec.params, order + loss)
    rep = verify_eigen_z(cert.Bdual, cert.eigen, cert.s, fam, window, order, params=cert.params)
    if not rep.ok:
        raise VerificationError(f"dual eigen-check failed: {rep.failures()[:1]}")
    cert.report = rep
    cert.verified_order = rep.verified_order
