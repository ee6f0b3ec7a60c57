"""Darboux transformations of the Jacobi operator with a prescribed kernel.

A :class:`DarbouxSpec` fixes (α, β, ε, k, l) and the coordinates A, B, C, D
of the kernel in the basis of kernel functions.  The builders produce the
factor P (coefficient 1 at shift 0), the transformed operator L with
L P = P L0, the cofactor Q with Q P = q(L0), and the involution-invariant
gauge P̄ used by the dual construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from flint import fmpq, fmpq_mat

from .errors import (
    DegenerateKernelError,
    InadmissibleError,
    ScopeError,
    VerificationError,
)
from .exact import Poly, RatFunc, integer_roots
from .jacobi import (
    KernelKind,
    contiguous_D,
    jacobi_L,
    kernel_fn,
    phi_fn,
)
from .ndiff import (
    DiffOp,
    SignedRatFunc,
    apply,
    casoratian_minors,
    compose,
    darboux_solve,
    from_kernel,
    involution_I,
    is_regular,
    poly_of_operator,
    right_divide,
)
from .params import ParamSet, is_integer, to_rat

__all__ = [
    "DarbouxSpec",
    "DarbouxBundle",
    "PBar",
    "eigen_poly",
    "build_f_basis",
    "casoratian",
    "check_admissible",
    "build_P",
    "build_L",
    "closed_form_L",
    "build_Q",
    "build_bundle",
    "build_P_tilde",
    "build_P_bar",
    "lift_via_contiguous",
    "auto_lift",
    "jordan_matrix",
    "spec_from_kernel",
]


def _rats(xs) -> tuple[Fraction, ...]:
    return tuple(to_rat(x) for x in xs)


@dataclass(frozen=True)
class DarbouxSpec:
    params: ParamSet
    k: int
    l: int
    A: tuple = ()
    B: tuple = ()
    C: tuple = ()
    D: tuple = ()

    def __post_init__(self):
        for name in "ABCD":
            object.__setattr__(self, name, _rats(getattr(self, name)))
        if self.k < 0 or self.l < 0:
            raise ValueError("k and l must be nonnegative")
        if len(self.A) != self.k or len(self.B) != self.k:
            raise ValueError(f"A and B need length k = {self.k}")
        if len(self.C) != self.l or len(self.D) != self.l:
            raise ValueError(f"C and D need length l = {self.l}")
        self.check_scope()

    def check_scope(self):
        a, b = self.params.alpha, self.params.beta
        if self.k > 0 and not (is_integer(a) and self.k <= abs(a)):
            raise ScopeError(
                f"k = {self.k} needs integer alpha with k <= |alpha|, got alpha = {a}; larger k "
                "leaves L0 with two Jordan blocks of eigenvalue 1 only up to |alpha|"
            )
        if self.l > 0 and not (is_integer(b) and self.l <= abs(b)):
            raise ScopeError(
                f"l = {self.l} needs integer beta with l <= |beta|, got beta = {b}; larger l "
                "leaves L0 with two Jordan blocks of eigenvalue -1 only up to |beta|"
            )

    @property
    def order(self) -> int:
        return self.k + self.l


def eigen_poly(k: int, l: int, var: str = "x") -> Poly:
    """(x-1)^k (x+1)^l."""
    return Poly([-1, 1], var) ** k * Poly([1, 1], var) ** l


@dataclass
class DarbouxBundle:
    spec: DarbouxSpec
    P: DiffOp
    L: DiffOp
    Q: DiffOp
    dets: list
    q: Poly
    L0: DiffOp
    # set when the bundle came out of a contiguous lift: c(n) with
    # (c P) p^{new} = P_old p^{old}
    lift_factor: RatFunc | None = None
    lifted_from: "DarbouxBundle | None" = field(default=None, repr=False)

    @property
    def params(self) -> ParamSet:
        return self.spec.params

    def check(self) -> None:
        """Re-verify the three defining identities."""
        if compose(self.L, self.P) != compose(self.P, self.L0):
            raise VerificationError("L P != P L0")
        if compose(self.Q, self.P) != poly_of_operator(self.q, self.L0):
            raise VerificationError("Q P != q(L0)")
        if compose(self.P, self.Q) != poly_of_operator(self.q, self.L):
            raise VerificationError("P Q != q(L)")


# -- kernel basis ---------------------------------------------------------------


def build_f_basis(spec: DarbouxSpec) -> list[SignedRatFunc]:
    """Triangular combinations f^(i) of kernel functions.

    f^(i) = sum_{r<=i} A_r φ+^(i-r) + B_r ψ+^(i-r) for i < k, and the same
    with C, D and the minus family for the last l functions.
    """
    p = spec.params
    out = []
    for i in range(spec.k):
        f = SignedRatFunc()
        for r in range(i + 1):
            if spec.A[r]:
                f = f + kernel_fn(KernelKind("phi+", i - r), p) * spec.A[r]
            if spec.B[r]:
                f = f + kernel_fn(KernelKind("psi+", i - r), p) * spec.B[r]
        out.append(f)
    for i in range(spec.l):
        f = SignedRatFunc()
        for r in range(i + 1):
            if spec.C[r]:
                f = f + kernel_fn(KernelKind("phi-", i - r), p) * spec.C[r]
            if spec.D[r]:
                f = f + kernel_fn(KernelKind("psi-", i - r), p) * spec.D[r]
        out.append(f)
    return out


def casoratian(basis: list, shifts: list[int]) -> SignedRatFunc:
    """det(f_i(n + shifts[j]))."""
    if not basis:
        return SignedRatFunc(1)
    return casoratian_minors(basis, list(shifts) + [max(shifts) + 1])[-1]


def _integer_defects(det: SignedRatFunc) -> tuple[bool, object]:
    if det.is_zero():
        return False, "identically zero"
    for parity, branch in enumerate(det.branches()):
        if branch.is_zero():
            return False, f"zero on all {'odd' if parity else 'even'} integers"
        for poly in (branch.num, branch.den):
            bad = sorted(m for m in integer_roots(poly) if m % 2 == parity) if poly.degree > 0 else []
            if bad:
                return False, bad[0]
    return True, None


def check_admissible(spec: DarbouxSpec) -> tuple[bool, object]:
    """(True, None) or (False, witness) for the Casoratian det(n) over shifts -m..-1."""
    m = spec.order
    if m == 0:
        return True, None
    det = casoratian(build_f_basis(spec), list(range(-m, 0)))
    return _integer_defects(det)


def build_P(spec: DarbouxSpec) -> tuple[DiffOp, list[SignedRatFunc]]:
    """P with support [-m, 0], coefficient 1 at 0, kernel span f^(i); also det_{-r}, r = 0..m.

    det_{-r}(n) is the Casoratian on shifts -m..0 with shift -r left out, so
    det_0 = det(n) and det_{-m}(n) = det(n+1).
    """
    m = spec.order
    ok, witness = check_admissible(spec)
    if not ok:
        raise InadmissibleError(f"kernel parameters are not admissible: {witness}", witness=witness)
    basis = build_f_basis(spec)
    try:
        P, minors = from_kernel(basis, (-m, 0), return_minors=True)
    except DegenerateKernelError as exc:
        raise InadmissibleError(str(exc), witness=exc.witness) from exc
    dets = [minors[m - r] for r in range(m + 1)]
    return P, dets


def closed_form_L(spec: DarbouxSpec, dets: list[SignedRatFunc]) -> DiffOp:
    """The tridiagonal operator from the closed formulas in terms of det_{-r}.

    a = a0,  b = b0 + a0(n) det_{-1}(n+1)/det(n+1) - a0(n-1) det_{-1}(n)/det(n),
    c = c0(n-m) det(n-1) det(n+1) / det(n)^2.
    """
    L0 = jacobi_L(spec.params)
    m = spec.order
    a0, b0, c0 = L0.coeff(1), L0.coeff(0), L0.coeff(-1)
    if m == 0:
        return L0
    det = dets[0]
    d1 = dets[1]
    b = b0 + a0 * d1.shift(1) / det.shift(1) - a0.shift(-1) * d1 / det
    c = c0.shift(-m) * det.shift(-1) * det.shift(1) / (det * det)
    return DiffOp({1: a0, 0: b, -1: c})


def build_L(spec: DarbouxSpec, P: DiffOp | None = None, dets=None) -> DiffOp:
    """L with L P = P L0, by exact division; the closed formulas are cross-checked."""
    if P is None:
        P, dets = build_P(spec)
    L0 = jacobi_L(spec.params)
    L = darboux_solve(P, L0)
    if dets is not None:
        Lf = closed_form_L(spec, dets)
        if Lf != L:
            diff = Lf - L
            raise VerificationError(
                f"closed-form coefficients disagree with division at shifts {sorted(diff.coeffs)}: "
                f"formula {Lf!r} vs division {L!r}"
            )
    ok, wit = is_regular(L)
    if not ok:
        raise VerificationError(f"transformed operator is not regular: {wit}")
    return L


def build_Q(spec: DarbouxSpec, P: DiffOp | None = None, L: DiffOp | None = None) -> DiffOp:
    """Q with Q P = q(L0); P Q = q(L) is verified as well."""
    if P is None:
        P, _ = build_P(spec)
    L0 = jacobi_L(spec.params)
    q = eigen_poly(spec.k, spec.l)
    Q = right_divide(poly_of_operator(q, L0), P)
    if L is None:
        L = darboux_solve(P, L0)
    if compose(P, Q) != poly_of_operator(q, L):
        raise VerificationError("P Q != q(L)")
    return Q


def build_bundle(spec: DarbouxSpec) -> DarbouxBundle:
    P, dets = build_P(spec)
    L = build_L(spec, P, dets)
    Q = build_Q(spec, P, L)
    return DarbouxBundle(spec, P, L, Q, dets, eigen_poly(spec.k, spec.l), jacobi_L(spec.params))


# -- the involution-invariant gauge ------------------------------------------------


class PBar(NamedTuple):
    P_bar: DiffOp
    rho: RatFunc
    s: int


def _parity_exponent(spec: DarbouxSpec) -> int:
    p = spec.params
    s = spec.order // 2
    return s + int(p.alpha + p.beta) * spec.l


def build_P_tilde(spec: DarbouxSpec) -> tuple[DiffOp, int]:
    """(P̃, sign) with P̃ = σ^l · det[F^(i)(n+j) | T^j], j = -s..s, F = f/φ.

    ``sign`` is the involution eigenvalue (-1)^{s + (α+β) l}; it is checked.
    """
    m = spec.order
    if m % 2:
        raise ScopeError("the symmetric determinant needs k + l even; lift the bundle first")
    s = m // 2
    p = spec.params
    phi_inv = SignedRatFunc(phi_fn(p.alpha, p.eps).inverse())
    F = [f * phi_inv for f in build_f_basis(spec)]
    minors = casoratian_minors(F, list(range(-s, s + 1))) if F else [SignedRatFunc(1)]
    sig_l = SignedRatFunc.sigma() ** spec.l
    coeffs = {}
    for r in range(m + 1):
        c = sig_l * minors[r]
        if (r + m) % 2:
            c = -c
        if not c.is_sigma_free():
            raise VerificationError(f"sign sequence did not cancel in the coefficient of T^{r - s}")
        coeffs[r - s] = c
    Pt = DiffOp(coeffs)
    sign = -1 if _parity_exponent(spec) % 2 else 1
    if involution_I(Pt, p) != (Pt if sign == 1 else -Pt):
        raise VerificationError(f"involution does not act on P̃ by the sign {sign}")
    return Pt, sign


def build_P_bar(spec: DarbouxSpec) -> PBar:
    """P̄ = q(n) P̃, invariant under the involution, and ρ with P = ρ T^{-s} φ P̄ φ^{-1}."""
    p = spec.params
    Pt, sign = build_P_tilde(spec)
    s = spec.order // 2
    if sign == 1:
        qn = RatFunc.const(1)
    else:
        qn = RatFunc(Poly.linear(1, p.center))
    Pbar = DiffOp.scalar(qn) @ Pt
    if involution_I(Pbar, p) != Pbar:
        raise VerificationError("P̄ is not invariant under the involution")
    phi = phi_fn(p.alpha, p.eps)
    from .ndiff import conjugate

    X = compose(DiffOp.T(-s), conjugate(Pbar, phi))
    lead = X.coeff(0)
    if lead.is_zero() or not lead.is_sigma_free():
        raise VerificationError("unexpected leading coefficient of the gauged operator")
    rho = lead.even.inverse()
    P, _ = build_P(spec)
    if rho * X != P:
        raise VerificationError("P != ρ T^{-s} φ P̄ φ^{-1}")
    return PBar(Pbar, rho, s)


# -- lifting an odd bundle ----------------------------------------------------------


def _null_space(rows: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    M = fmpq_mat(len(rows), ncols, [fmpq(c.numerator, c.denominator) for r in rows for c in r])
    R, rank = M.rref()
    pivots = []
    row = 0
    for col in range(ncols):
        if row < rank and R[row, col] != 0:
            pivots.append(col)
            row += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * ncols
        v[fcol] = Fraction(1)
        for i, pc in enumerate(pivots):
            x = R[i, fcol]
            v[pc] = -Fraction(int(x.p), int(x.q))
        basis.append(v)
    return basis


def spec_from_kernel(P: DiffOp, params: ParamSet, k: int, l: int) -> DarbouxSpec:
    """Recover coordinates A, B, C, D of Ker P in the closed-form kernel basis.

    Ker P must sit inside Ker (L0-1)^k (L0+1)^l.  The null space is found
    pointwise, each family's top Jordan vector is read off and turned into
    triangular coordinates, and the result is checked by rebuilding P.
    """
    fams = []
    for i in range(k):
        fams += [("A", i, KernelKind("phi+", i)), ("B", i, KernelKind("psi+", i))]
    for i in range(l):
        fams += [("C", i, KernelKind("phi-", i)), ("D", i, KernelKind("psi-", i))]
    funcs = [kernel_fn(kind, params) for _, _, kind in fams]
    images = [apply(P, f) for f in funcs]
    rows = []
    n = 0
    lo, hi = P.support
    while len(rows) < 3 * len(funcs) + 6:
        for cand in (n, -n - 1):
            try:
                rows.append([g(cand) for g in images])
            except ZeroDivisionError:
                pass
        n += 1
    null = _null_space(rows, len(funcs))
    coords = {}
    for fam, letters in (("+", ("A", "B")), ("-", ("C", "D"))):
        size = k if fam == "+" else l
        if size == 0:
            continue
        idx = [j for j, (name, _, _) in enumerate(fams) if name in letters]
        best = None
        for v in null:
            top = max((fams[j][1] for j in idx if v[j] != 0), default=-1)
            if top == size - 1:
                best = v
                break
        if best is None:
            # combine null vectors until the top index appears
            for v in null:
                if any(v[j] for j in idx):
                    best = v
        if best is None:
            raise VerificationError(f"kernel has no component in the {fam} family")
        a_name, b_name = letters
        a = [Fraction(0)] * size
        b = [Fraction(0)] * size
        for j in idx:
            name, i, _ = fams[j]
            if name == a_name:
                a[i] = best[j]
            else:
                b[i] = best[j]
        coords[a_name] = [a[size - 1 - r] for r in range(size)]
        coords[b_name] = [b[size - 1 - r] for r in range(size)]
    spec = DarbouxSpec(
        params, k, l, coords.get("A", ()), coords.get("B", ()), coords.get("C", ()), coords.get("D", ())
    )
    P2, _ = build_P(spec)
    if P2 != P:
        raise VerificationError("recovered kernel coordinates do not reproduce P")
    return spec


def lift_via_contiguous(bundle: DarbouxBundle, direction: str = "alpha") -> DarbouxBundle:
    """Re-express L as a Darboux transform of L0 at α+1 (or β+1) with one more kernel vector.

    P' = c^{-1} P D_-^{α+1} where c is the shift-0 coefficient; then
    c P' p^{α+1} = P p^{α}, and L' = c^{-1} L c satisfies L' P' = P' L0'.
    """
    spec = bundle.spec
    p = spec.params
    if direction == "alpha":
        new = p.replace(alpha=p.alpha + 1)
        D = contiguous_D("-alpha", new)
        k, l = spec.k + 1, spec.l
    elif direction == "beta":
        new = p.replace(beta=p.beta + 1)
        D = contiguous_D("-beta", new)
        k, l = spec.k, spec.l + 1
    else:
        raise ValueError("direction must be 'alpha' or 'beta'")
    raw = compose(bundle.P, D)
    c = raw.coeff(0)
    Pn = DiffOp.scalar(c.inverse()) @ raw
    new_spec = spec_from_kernel(Pn, new, k, l)
    out = build_bundle(new_spec)
    if out.P != Pn:
        raise VerificationError("lifted factor does not match its rebuilt kernel")
    from .ndiff import conjugate

    if out.L != conjugate(bundle.L, c.inverse()):
        raise VerificationError("lifted operator is not the expected conjugate")
    out.lift_factor = c.even
    out.lifted_from = bundle
    return out


def auto_lift(bundle: DarbouxBundle) -> DarbouxBundle:
    """Lift once so that k + l becomes even, staying inside the integrality scope."""
    spec = bundle.spec
    if spec.order % 2 == 0:
        return bundle
    a, b = spec.params.alpha, spec.params.beta
    tried = []
    if is_integer(a) and (spec.k + 1) <= abs(a + 1):
        try:
            return lift_via_contiguous(bundle, "alpha")
        except (ScopeError, InadmissibleError) as exc:
            tried.append(str(exc))
    if is_integer(b) and (spec.l + 1) <= abs(b + 1):
        try:
            return lift_via_contiguous(bundle, "beta")
        except (ScopeError, InadmissibleError) as exc:
            tried.append(str(exc))
    raise ScopeError(
        "k + l is odd and no upward contiguous lift stays within the integrality scope"
        + (f" ({'; '.join(tried)})" if tried else "")
    )


# -- Jordan structure ------------------------------------------------------------


def jordan_matrix(spec: DarbouxSpec) -> list[list[Fraction]]:
    """Matrix of L0 on Ker P in the f-basis (column j holds the coordinates of L0 f^(j))."""
    basis = build_f_basis(spec)
    m = len(basis)
    if m == 0:
        return []
    L0 = jacobi_L(spec.params)
    images = [apply(L0, f) for f in basis]
    # sample points where the basis matrix is invertible
    n0 = 0
    while True:
        pts = list(range(n0, n0 + m))
        try:
            M = fmpq_mat(m, m, [_fq(basis[i](pt)) for pt in pts for i in range(m)])
            if M.det() != 0:
                break
        except ZeroDivisionError:
            pass
        n0 += 1
    out = []
    cols = []
    for j in range(m):
        rhs = fmpq_mat(m, 1, [_fq(images[j](pt)) for pt in pts])
        x = M.solve(rhs)
        cols.append([Fraction(int(x[i, 0].p), int(x[i, 0].q)) for i in range(m)])
    for j in range(m):
        acc = SignedRatFunc()
        for i in range(m):
            if cols[j][i]:
                acc = acc + basis[i] * cols[j][i]
        if acc != images[j]:
            raise VerificationError("L0 does not preserve the span of the kernel basis")
    for i in range(m):
        out.append([cols[j][i] for j in range(m)])
    return out


def _fq(x: Fraction) -> fmpq:
    return fmpq(x.numerator, x.denominator)
