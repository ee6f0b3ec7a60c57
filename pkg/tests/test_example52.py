from fractions import Fraction

import pytest

from jacobi_darboux import example52 as ex
from jacobi_darboux.darboux import build_bundle, build_f_basis, build_P_bar, eigen_poly
from jacobi_darboux.errors import NotDivisibleError
from jacobi_darboux.jacobi import KernelKind, jacobi_L_tilde, kernel_fn, phi_fn
from jacobi_darboux.ndiff import SignedRatFunc, poly_of_operator, right_divide
from jacobi_darboux.series import psi_family, verify_eigen_z

EPS = Fraction(1, 3)
SAMPLES = [(Fraction(2), Fraction(5, 7)), (Fraction(-3, 4), Fraction(11, 5))]


@pytest.fixture(params=SAMPLES, ids=["s1", "s2"])
def sample(request):
    B0, B1 = request.param
    return EPS, B0, B1


def gauged_basis(eps, B0, B1):
    spec = ex.example_spec(eps, B0, B1)
    inv = phi_fn(2, eps).inverse()
    return [f * inv for f in build_f_basis(spec)]


def test_printed_kernel_functions():
    p = ex.example_spec(EPS, 1, 1).params
    for (fam, i), rf in ex.printed_kernels(EPS).items():
        assert kernel_fn(KernelKind(fam, i), p) == SignedRatFunc(rf)


def test_printed_gauged_kernel_differs(sample):
    F = gauged_basis(*sample)
    printed = ex.printed_F(*sample)
    assert F[0] != SignedRatFunc(printed[0])
    assert F[1] != SignedRatFunc(printed[1])


def test_derived_gauged_kernel(sample):
    F = gauged_basis(*sample)
    derived = ex.derived_F(*sample)
    assert [SignedRatFunc(x) for x in derived] == F


def test_symmetric_factor_against_determinant_formula(sample):
    pb = build_P_bar(ex.example_spec(*sample))
    assert pb.P_bar == ex.derived_P_bar(*sample)
    assert pb.P_bar != ex.printed_P_bar(*sample)


def test_printed_symmetric_factor_does_not_divide(sample):
    p = ex.example_spec(*sample).params
    target = poly_of_operator(eigen_poly(2, 0), jacobi_L_tilde(p))
    with pytest.raises(NotDivisibleError):
        right_divide(target, ex.printed_P_bar(*sample))
    right_divide(target, ex.derived_P_bar(*sample))


def _eigen_report(B, sample, order=40):
    spec = ex.example_spec(*sample)
    fam = psi_family(build_bundle(spec), spec.params, order + 12)
    return verify_eigen_z(B, ex.printed_h(*sample), 1, fam, range(-6, 7), order, params=spec.params)


def test_printed_operator_fails_eigen_check(sample):
    rep = _eigen_report(ex.printed_B(*sample), sample)
    assert not rep.ok


def test_corrected_operator_passes_with_printed_eigenvalue(sample):
    rep = _eigen_report(ex.corrected_B(*sample), sample)
    assert rep.ok and rep.verified_order >= 40


def test_correction_touches_two_coefficients(sample):
    Bp, Bc = ex.printed_B(*sample), ex.corrected_B(*sample)
    diff = Bc - Bp
    assert sorted(diff.coeffs) == [2, 6]
    assert Bc.order == 10


def test_intertwiner_leading_terms(sample):
    assert ex.check_printed_G(*sample) == {10: True, 9: True, 8: True, 7: False}
    G = ex._intertwiner_order10(*sample)
    for d, c in ex.derived_G_leading(*sample).items():
        assert G.coeff(d).num * (1 / G.coeff(d).den.leading()) == c


def test_reproduce_rows():
    rows = ex.reproduce(EPS, *SAMPLES[0], order=30, window=range(-3, 4))
    status = {r["check"]: r["ok"] for r in rows}
    assert not ex.all_passed(rows)
    failing = sorted(r["check"] for r in rows if not r["ok"] and not r["informational"])
    assert failing == ["F0 = f0/phi", "F1 = f1/phi", "P-bar closed form", "printed B and h eigen-check"]
    assert status["corrected B with printed h"]
    assert all(status[f"kernel {f}{i}"] for f in ("phi+", "psi+") for i in (0, 1))
