"""Exception hierarchy. Every error carries enough context to localize the failure."""


class DarbouxError(Exception):
    """Base class for all library errors."""


class ConditionError(DarbouxError, ValueError):
    """Parameters violate the regularity conditions on (alpha, beta, eps)."""


class NotInvariantError(DarbouxError, ValueError):
    """An object required to be invariant under the involution is not.

    ``witness`` holds the nonzero anti-invariant part.
    """

    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class NotDivisibleError(DarbouxError, ArithmeticError):
    """Exact right division of difference operators failed."""

    def __init__(self, msg, remainder=None):
        super().__init__(msg)
        self.remainder = remainder


class DegenerateKernelError(DarbouxError, ValueError):
    """A kernel basis has a Casoratian that vanishes identically or on an integer."""

    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class InadmissibleError(DarbouxError, ValueError):
    """The kernel parameters A, B, C, D are not admissible."""

    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class ScopeError(DarbouxError, ValueError):
    """Request lies outside the integrality scope where closed forms exist."""


class VerificationError(DarbouxError, AssertionError):
    """An internal exact verification step failed."""
