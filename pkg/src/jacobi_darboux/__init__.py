"""Exact Darboux transformations of Jacobi difference operators and their bispectral duals."""

from .params import ParamSet
from .errors import (
    ConditionError,
    DarbouxError,
    DegenerateKernelError,
    InadmissibleError,
    NotDivisibleError,
    NotInvariantError,
    ScopeError,
    VerificationError,
)
from .exact import Poly, RatFunc, rewrite_in_lambda
from .ndiff import DiffOp, SignedRatFunc, compose, involution_I, right_divide
from .zdiff import DiffOpZ, FreeElem, eval_to_diffn, eval_to_diffz_b
from .jacobi import B_op, jacobi_L, jacobi_L_tilde, kernel_fn, lambda_fn, phi_fn
from .darboux import (
    DarbouxBundle,
    DarbouxSpec,
    auto_lift,
    build_bundle,
    build_P_bar,
    jordan_matrix,
)
from .bispectral import build_dual, decompose_left, decompose_right, verify_ino
from .series import LaurentSeries, psi_family, verify_eigen_z

__version__ = "0.1.0"
