"""The worked example α = 2, β = 0, k = 2, l = 0 with kernel f0 = φ0 + B0 ψ0.

Printed closed forms (kernel functions, gauged kernel F, the invariant P̄,
the order-10 dual operator and its degree-5 eigenvalue polynomial) are
encoded here as functions of (ε, B0, B1) and checked against the engine.
"""

from __future__ import annotations

from fractions import Fraction

from .bispectral import build_dual
from .darboux import DarbouxSpec, build_bundle, build_f_basis, build_P_bar
from .errors import VerificationError
from .exact import Poly, RatFunc, pochhammer_poly
from .jacobi import KernelKind, kernel_fn, lambda_fn, phi_fn
from .ndiff import DiffOp, SignedRatFunc
from .params import ParamSet, to_rat
from .series import psi_family, verify_eigen_z
from .zdiff import DiffOpZ, compose_z

__all__ = [
    "example_spec",
    "kappa",
    "printed_kernels",
    "printed_F",
    "printed_P_bar",
    "printed_h",
    "printed_B",
    "printed_G_leading",
    "derived_F",
    "derived_P_bar",
    "corrected_B",
    "derived_G_leading",
    "check_printed_G",
    "reproduce",
    "all_passed",
]

ALPHA, BETA, K, L = 2, 0, 2, 0


def example_spec(eps, B0, B1) -> DarbouxSpec:
    return DarbouxSpec(ParamSet(ALPHA, BETA, eps), K, L, A=(1, 0), B=(B0, B1))


def kappa(eps) -> Fraction:
    eps = to_rat(eps)
    return (eps + 1) * (eps + 2)


def printed_kernels(eps) -> dict:
    """φ₊^(0), φ₊^(1), ψ₊^(0), ψ₊^(1) as rational functions of n."""
    eps = to_rat(eps)
    k = kappa(eps)
    return {
        ("phi+", 0): RatFunc(pochhammer_poly(eps + 1, 2) * (1 / k)),
        ("phi+", 1): RatFunc(pochhammer_poly(eps, 4) * (1 / (6 * k))),
        ("psi+", 0): RatFunc(Poly.const(k), pochhammer_poly(eps + 1, 2)),
        ("psi+", 1): RatFunc.const(-k / 2),
    }


def printed_F(eps, B0, B1) -> tuple[RatFunc, RatFunc]:
    eps, B0, B1 = to_rat(eps), to_rat(B0), to_rat(B1)
    k = kappa(eps)
    lam = lambda_fn(ParamSet(ALPHA, BETA, eps))
    one = RatFunc.const(1)
    F0 = one + lam * (B0 / (6 * k))
    r = (lam + one).inverse() * k
    F1 = lam * (B1 / (6 * k)) + r * (r - one * (B0 / 2))
    return F0, F1


def _P_bar_from_F(eps, F0: RatFunc, F1: RatFunc) -> DiffOp:
    """(n + ε + 3/2) times the 3x3 determinant with rows F(n-1), F(n), F(n+1)."""
    pre = RatFunc(Poly.linear(1, to_rat(eps) + Fraction(3, 2)))
    # cofactor expansion along the last column (T^{-1}, 1, T)
    c_m1 = F0 * F1.shift(1) - F0.shift(1) * F1
    c_0 = -(F0.shift(-1) * F1.shift(1) - F0.shift(1) * F1.shift(-1))
    c_p1 = F0.shift(-1) * F1 - F0 * F1.shift(-1)
    return DiffOp({-1: pre * c_m1, 0: pre * c_0, 1: pre * c_p1})


def printed_P_bar(eps, B0, B1) -> DiffOp:
    return _P_bar_from_F(eps, *printed_F(eps, B0, B1))


def derived_P_bar(eps, B0, B1) -> DiffOp:
    return _P_bar_from_F(eps, *derived_F(eps, B0, B1))


def printed_h(eps, B0, B1) -> Poly:
    """h(x) from the printed h(x - 2)."""
    k = kappa(eps)
    B0, B1 = to_rat(B0), to_rat(B1)
    hs = Poly([0, -15 * B0 ** 2 * k ** 4, -(30 * B1 * k ** 2 + 20 * B0 * k ** 2 + 4),
               10 * B0 * k ** 2 + 8, -5, 1])
    return hs(Poly.linear(1, 2))


def _z(cs) -> Poly:
    return Poly(list(cs), "z")


def printed_B(eps, B0, B1) -> DiffOpZ:
    """The printed order-10 dual operator."""
    k = kappa(eps)
    B0, B1 = to_rat(B0), to_rat(B1)
    z = _z([0, 1])
    zm, zp = z - 1, z + 1
    b0k2, b1k2, b0sq = B0 * k ** 2, B1 * k ** 2, B0 ** 2 * k ** 4
    c = {
        10: zm ** 5 * zp ** 5,
        9: 50 * zm ** 4 * z * zp ** 4,
        8: 5 * zm ** 3 * zp ** 3 * _z([-5, 11]) * _z([7, 17]),
        7: 160 * zm ** 2 * zp ** 2 * _z([1, -28, -7, 52]),
        6: 30 * b0sq * z + 120 * b1k2 * zm + Poly.const(120 * b0k2, "z"),
        5: 180 * b0k2 * zm ** 2 * z * zp ** 2 + 240 * zm ** 2 * _z([-30, 141, 504, 337]),
        4: -30 * b1k2 * zm ** 2 * zp ** 2 + 120 * b0k2 * zm * zp * _z([-3, -1, 8])
        + 120 * zm ** 2 * _z([161, 758, 641]),
        3: -240 * b1k2 * zm * z * zp + 240 * b0k2 * _z([1, -7, -3, 7]) + 960 * zm ** 2 * _z([19, 26]),
        2: -60 * b1k2 * zm * _z([5, 7]) + 120 * b0k2 * _z([1, 2]) * _z([-5, 3]) + 1440 * zm ** 2,
        1: -(30 * b0sq * z + 120 * b1k2 * zm + Poly.const(120 * b0k2, "z")),
    }
    return DiffOpZ(c)


def printed_G_leading(eps, B0, B1) -> dict:
    """The four printed leading coefficients of the order-10 intertwiner."""
    k = kappa(eps)
    B0 = to_rat(B0)
    z = _z([0, 1])
    zm, zp = z - 1, z + 1
    return {
        10: zm ** 6 * zp ** 5,
        9: zm ** 5 * zp ** 4 * _z([7, 57]),
        8: 4 * zm ** 4 * zp ** 3 * _z([-43, 68, 311]),
        7: 3 * B0 * k ** 2 * zm ** 2 * zp ** 2 + 2 * _z([1501, -3636, -15734, 5796, 18793]),
    }


def derived_F(eps, B0, B1) -> tuple[RatFunc, RatFunc]:
    """f^(i)/φ computed from the printed kernel functions, written through λ."""
    eps, B0, B1 = to_rat(eps), to_rat(B0), to_rat(B1)
    k = kappa(eps)
    lam = lambda_fn(ParamSet(ALPHA, BETA, eps))
    one = RatFunc.const(1)
    r = (lam + one * 2).inverse() * k  # ψ0 = κ/(λ+2) and ψ0/φ0 = r^2
    F0 = one + r * r * B0
    F1 = r * r * B1 + lam * Fraction(1, 6) - r * (k * B0 / 2)
    return F0, F1


def corrected_B(eps, B0, B1) -> DiffOpZ:
    """The printed operator with the ∂^6 and ∂^2 coefficients replaced by fitted ones.

    The replacements were found by solving for the order-10 operator with
    Ψ as eigenfunction and eigenvalue printed_h; the other nine
    coefficients agree with the printed ones.
    """
    k = kappa(eps)
    B0 = to_rat(B0)
    Bp = printed_B(eps, B0, B1)
    z = _z([0, 1])
    w = z * z - 1
    c = dict(Bp.coeffs)
    c[6] = 10 * B0 * k ** 2 * w ** 3 + 40 * (z + 1) * (z - 1) ** 2 * _z([-137, -281, 665, 929])
    c[2] = Bp.coeff(2).num - 15 * B0 ** 2 * k ** 4 * w
    return DiffOpZ(c)


def derived_G_leading(eps, B0, B1) -> dict:
    """Leading coefficients of the unique order-10 G with B G = G h(B_{2,0}) (B corrected)."""
    out = dict(printed_G_leading(eps, B0, B1))
    z = _z([0, 1])
    out[7] = 4 * (z - 1) ** 3 * (z + 1) ** 2 * _z([-199, -1391, 943, 3335])
    return out


def _intertwiner_order10(eps, B0, B1) -> DiffOpZ:
    """Solve B G = G h(B_{2,0}) for G of order 10, ∂^d coefficient of degree <= d+1."""
    from flint import fmpq, fmpq_mat

    from .bispectral import poly_in_B
    from .darboux import _null_space

    Bc = corrected_B(eps, B0, B1)
    hB = poly_in_B(printed_h(eps, B0, B1), ParamSet(ALPHA, BETA, eps))
    cols = [(d, i) for d in range(11) for i in range(d + 2)]
    imgs = []
    for d, i in cols:
        g = DiffOpZ({d: Poly([0] * i + [1], "z")})
        imgs.append(compose_z(Bc, g) - compose_z(g, hB))
    keys = sorted({(o, j) for im in imgs for o, c in im.coeffs.items() for j in range(c.num.degree + 1)})

    def entry(im, o, j):
        c = im.coeffs.get(o)
        if c is None or j > c.num.degree:
            return Fraction(0)
        return c.num.coeffs[j] / c.den.leading()

    rows = [[entry(im, o, j) for im in imgs] for o, j in keys]
    M = fmpq_mat(len(rows), len(cols), [fmpq(x.numerator, x.denominator) for r in rows for x in r])
    R, rk = M.rref()
    red = [[Fraction(int(R[i, j].p), int(R[i, j].q)) for j in range(len(cols))] for i in range(rk)]
    ns = _null_space(red, len(cols))
    if len(ns) != 1:
        raise VerificationError(f"expected a one-dimensional solution space, got {len(ns)}")
    v = ns[0]
    lead = v[cols.index((10, 11))]
    coeffs = {}
    for d in range(11):
        coeffs[d] = Poly([v[cols.index((d, i))] / lead for i in range(d + 2)], "z")
    return DiffOpZ(coeffs)


def check_printed_G(eps, B0, B1) -> dict:
    """Compare the printed leading coefficients of G with the solved intertwiner."""
    G = _intertwiner_order10(eps, B0, B1)
    pg = printed_G_leading(eps, B0, B1)
    return {d: G.coeff(d).num * (1 / G.coeff(d).den.leading()) == pg[d] for d in sorted(pg, reverse=True)}


def _check(name, ok, results, detail="", informational=False):
    results.append({"check": name, "ok": bool(ok), "detail": detail, "informational": informational})


def all_passed(rows: list[dict]) -> bool:
    """Pass/fail over the printed-data rows; informational rows do not count."""
    return all(r["ok"] for r in rows if not r["informational"])


def reproduce(eps, B0, B1, order: int = 40, window=range(-6, 7), with_dual: bool = False,
              with_corrections: bool = True) -> list[dict]:
    """Compare every printed closed form with the engine; one row per check.

    Rows marked informational compare the engine with the corrected forms in
    this module rather than with printed data.
    """
    eps, B0, B1 = to_rat(eps), to_rat(B0), to_rat(B1)
    spec = example_spec(eps, B0, B1)
    params = spec.params
    out: list[dict] = []

    for (fam, i), rf in printed_kernels(eps).items():
        mine = kernel_fn(KernelKind(fam, i), params)
        _check(f"kernel {fam}{i}", mine == SignedRatFunc.coerce(rf), out)

    phi_inv = phi_fn(ALPHA, eps).inverse()
    basis = build_f_basis(spec)
    gauged = [f * phi_inv for f in basis]
    for i, Fi in enumerate(printed_F(eps, B0, B1)):
        _check(f"F{i} = f{i}/phi", gauged[i] == SignedRatFunc.coerce(Fi), out)

    pb = build_P_bar(spec)
    _check("P-bar closed form", pb.P_bar == printed_P_bar(eps, B0, B1), out)

    bundle = build_bundle(spec)
    h = printed_h(eps, B0, B1)
    fam = psi_family(bundle, params, order + 12)
    rep = verify_eigen_z(printed_B(eps, B0, B1), h, 1, fam, window, order, params=params)
    bad = rep.failures()
    _check("printed B and h eigen-check", rep.ok, out,
           "" if rep.ok else f"{len(bad)} of {len(rep.rows)} points fail; first {bad[0]}")

    if with_corrections:
        for i, Fi in enumerate(derived_F(eps, B0, B1)):
            _check(f"derived F{i}", gauged[i] == SignedRatFunc.coerce(Fi), out, informational=True)
        _check("determinant formula with derived F", pb.P_bar == derived_P_bar(eps, B0, B1), out,
               informational=True)
        rep2 = verify_eigen_z(corrected_B(eps, B0, B1), h, 1, fam, window, order, params=params)
        _check("corrected B with printed h", rep2.ok, out, f"verified through t^{rep2.verified_order}",
               informational=True)
        for d, ok in check_printed_G(eps, B0, B1).items():
            _check(f"printed G coefficient of d^{d}", ok, out, informational=True)

    if with_dual:
        cert = build_dual(bundle)
        _check("constructed dual", cert.verified_order >= order, out,
               f"order {cert.Bdual.order}, eigen degree {cert.eigen.degree}", informational=True)
    return out
