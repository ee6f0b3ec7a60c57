"""Parameter bundle (alpha, beta, eps) of the biinfinite Jacobi operator."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ConditionError


def to_rat(x) -> Fraction:
    """Coerce ints, Fractions, ``"p/q"`` strings and flint ``fmpq`` to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if hasattr(x, "p") and hasattr(x, "q"):
        return Fraction(int(x.p), int(x.q))
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def rat_str(x) -> str:
    r = to_rat(x)
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def is_integer(x: Fraction) -> bool:
    return to_rat(x).denominator == 1


@dataclass(frozen=True)
class ParamSet:
    """The triple (alpha, beta, eps).

    With ``check=True`` (the default) the regularity conditions are enforced:
    eps, eps+alpha, eps+beta, eps+alpha+beta and 2*eps+alpha+beta must all be
    non-integers.
    """

    alpha: Fraction
    beta: Fraction
    eps: Fraction
    check: bool = True

    def __post_init__(self):
        object.__setattr__(self, "alpha", to_rat(self.alpha))
        object.__setattr__(self, "beta", to_rat(self.beta))
        object.__setattr__(self, "eps", to_rat(self.eps))
        if self.check:
            bad = self.violated_conditions()
            if bad:
                exc = ConditionError(
                    f"parameters {self} violate the regularity conditions: "
                    + ", ".join(bad) + " integral"
                )
                exc.violated = bad
                raise exc

    @classmethod
    def unchecked(cls, alpha, beta, eps) -> "ParamSet":
        return cls(alpha, beta, eps, check=False)

    def violated_conditions(self) -> list[str]:
        a, b, e = self.alpha, self.beta, self.eps
        named = {
            "eps": e,
            "eps+alpha": e + a,
            "eps+beta": e + b,
            "eps+alpha+beta": e + a + b,
            "2*eps+alpha+beta": 2 * e + a + b,
        }
        return [name for name, v in named.items() if v.denominator == 1]

    @property
    def shift_sum(self) -> Fraction:
        """2*eps + alpha + beta, the recurring constant in all denominators."""
        return 2 * self.eps + self.alpha + self.beta

    @property
    def center(self) -> Fraction:
        """The involution n -> -(n + 2*eps + alpha + beta + 1) reflects about -center."""
        return self.eps + (self.alpha + self.beta + 1) / 2

    def replace(self, **kw) -> "ParamSet":
        vals = {"alpha": self.alpha, "beta": self.beta, "eps": self.eps, "check": self.check}
        vals.update(kw)
        return ParamSet(**vals)

    def __repr__(self):
        return (
            f"ParamSet(alpha={rat_str(self.alpha)}, beta={rat_str(self.beta)}, "
            f"eps={rat_str(self.eps)})"
        )
