# %% [markdown]
# A Darboux transformation of L0
#
# P is determined by its kernel, built from the kernel ladders of L0 ∓ 1 with
# free coordinates A, B, C, D.  Dividing gives L with L P = P L0 and a
# partner Q with Q P = q(L0).

# %%
from fractions import Fraction

from jacobi_darboux import DarbouxSpec, ParamSet, build_bundle, jordan_matrix
from jacobi_darboux.ndiff import compose, is_regular, poly_of_operator

spec = DarbouxSpec(ParamSet(1, 1, Fraction(1, 3)), 1, 1, A=(1,), B=(2,), C=(1,), D=(3,))
b = build_bundle(spec)
print("q(x) =", b.q)
print("P support:", b.P.support, " L support:", b.L.support)

# %%
print("L P == P L0:", compose(b.L, b.P) == compose(b.P, b.L0))
print("Q P == q(L0):", compose(b.Q, b.P) == poly_of_operator(b.q, b.L0))
print("P Q == q(L):", compose(b.P, b.Q) == poly_of_operator(b.q, b.L))
print("L regular:", is_regular(b.L)[0])

# %% [markdown]
# L0 acts on Ker P through a Jordan block per eigenvalue.

# %%
for row in jordan_matrix(spec):
    print([str(x) for x in row])
