# %% [markdown]
# Jacobi difference operators in exact arithmetic
#
# L acts on functions of the degree n by shifts T^j.  Its eigenfunctions are
# Jacobi polynomials in z with eigenvalue z; the same functions are
# eigenfunctions of a second order differential operator B in z with eigenvalue λ(n).

# %%
from fractions import Fraction

from jacobi_darboux import ParamSet, jacobi_L, B_op, lambda_fn
from jacobi_darboux.jacobi import KernelKind, contiguous_D, kernel_fn
from jacobi_darboux.ndiff import DiffOp, apply, compose
from flint import fmpq_poly

from jacobi_darboux.series import apply_n, apply_z, hyp_family

p = ParamSet(2, 0, Fraction(1, 3))
L = jacobi_L(p)
print("L =", L)

# %% [markdown]
# Kernel ladders: (L - 1) lowers the φ₊ family by one step and kills the bottom.

# %%
one = DiffOp.identity()
phi1 = kernel_fn(KernelKind("phi+", 1), p)
phi0 = kernel_fn(KernelKind("phi+", 0), p)
print("(L-1) φ₊⁽¹⁾ == φ₊⁽⁰⁾:", apply(L - one, phi1) == phi0)
print("(L-1) φ₊⁽⁰⁾ == 0:", apply(L - one, phi0).is_zero())

# %% [markdown]
# Contiguous factorization: L - 1 splits through the neighbour at α - 1.

# %%
lower = contiguous_D("-alpha", p)
raise_ = contiguous_D("+alpha", p.replace(alpha=p.alpha - 1))
print("L - 1 == D+ D-:", compose(raise_, lower) == L - one)

# %% [markdown]
# Bispectrality on truncated series in t = (1 - z)/2, through order 30.

# %%
fam = hyp_family(p, 32)
B, lam = B_op(p.alpha, p.beta), lambda_fn(p)
z = fmpq_poly([1, -2])  # z as a polynomial in t
for n in (-2, 0, 3):
    f = fam(n)
    ok_z = apply_z(B, f) == f.scale(lam(n))
    ok_n = apply_n(L, fam, n) == f.mul_poly(z)
    print(f"n={n:2d}  B p = λ p: {ok_z}   L p = z p: {ok_n}")
