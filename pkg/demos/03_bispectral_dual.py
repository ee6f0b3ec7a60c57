# %% [markdown]
# The dual differential operator
#
# The factors of the transformation are rewritten as words in λ and the gauged
# operator, mapped to differential operators in z, and assembled into a
# differential operator whose eigenfunctions are the new family.  The result is
# certified on exact truncated series.

# %%
from fractions import Fraction

from jacobi_darboux import DarbouxSpec, ParamSet, build_bundle, build_dual, decompose_left, verify_ino
from jacobi_darboux.darboux import build_P_bar

spec = DarbouxSpec(ParamSet(1, 1, Fraction(1, 3)), 1, 1, A=(1,), B=(2,), C=(1,), D=(3,))
bundle = build_bundle(spec)

# %%
Pbar = build_P_bar(spec).P_bar
dec = decompose_left(Pbar, spec.params)
print("terms:", len(dec.terms), " reconstructs:", dec.reconstruct() == Pbar)

# %%
cert = build_dual(bundle, order=40)
print("dual order:", cert.Bdual.order, " eigenvalue degree:", cert.eigen.degree)
print("eigen-relation verified through order", cert.verified_order, ":", cert.report.ok)
ok, _ = verify_ino(cert.G_P, cert.G_Q, cert.mu, cert.nu, cert.qz, cert.params, order="QP")
print("G_Q q(z)^-1 G_P identity:", ok)
