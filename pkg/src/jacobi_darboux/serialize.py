"""JSON encoding of the exact objects.  Every rational is a "p/q" string."""

from __future__ import annotations

import json
from fractions import Fraction

from .darboux import DarbouxBundle, DarbouxSpec
from .exact import Poly, RatFunc
from .ndiff import DiffOp, SignedRatFunc
from .params import ParamSet, to_rat
from .zdiff import DiffOpZ

__all__ = [
    "rat_to_json",
    "rat_from_json",
    "poly_to_json",
    "poly_from_json",
    "ratfunc_to_json",
    "ratfunc_from_json",
    "diffop_to_json",
    "diffop_from_json",
    "diffopz_to_json",
    "diffopz_from_json",
    "spec_to_json",
    "spec_from_json",
    "bundle_to_json",
    "bundle_from_json",
    "certificate_to_json",
    "dumps",
]


def rat_to_json(x) -> str:
    x = to_rat(x)
    return f"{x.numerator}/{x.denominator}"


def rat_from_json(s) -> Fraction:
    if isinstance(s, bool):
        raise ValueError("boolean is not a rational")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        return Fraction(s.strip())
    raise ValueError(f"expected a rational string, got {s!r}")


def poly_to_json(p: Poly) -> list[str]:
    return [rat_to_json(c) for c in p.coeffs]


def poly_from_json(cs, var: str = "n") -> Poly:
    return Poly([rat_from_json(c) for c in cs], var)


def ratfunc_to_json(r: RatFunc) -> dict:
    return {"num": poly_to_json(r.num), "den": poly_to_json(r.den)}


def ratfunc_from_json(d, var: str = "n") -> RatFunc:
    return RatFunc(poly_from_json(d["num"], var), poly_from_json(d["den"], var))


def diffop_to_json(D: DiffOp) -> dict:
    lo, hi = D.support if not D.is_zero() else (0, -1)
    coeffs = []
    for j in sorted(D.coeffs):
        c = D.coeffs[j]
        coeffs.append({"shift": j, "even": ratfunc_to_json(c.even), "odd": ratfunc_to_json(c.odd)})
    return {"support": [lo, hi], "coeffs": coeffs}


def diffop_from_json(d) -> DiffOp:
    out = {}
    for c in d["coeffs"]:
        out[int(c["shift"])] = SignedRatFunc(ratfunc_from_json(c["even"]), ratfunc_from_json(c["odd"]))
    D = DiffOp(out)
    if out and list(D.support) != [int(x) for x in d["support"]]:
        raise ValueError(f"support field {d['support']} disagrees with coefficients {D.support}")
    return D


def diffopz_to_json(G: DiffOpZ) -> dict:
    coeffs = [{"order": o, **ratfunc_to_json(G.coeffs[o])} for o in sorted(G.coeffs)]
    return {"order": G.order, "coeffs": coeffs}


def diffopz_from_json(d) -> DiffOpZ:
    return DiffOpZ({int(c["order"]): ratfunc_from_json(c, "z") for c in d["coeffs"]})


def spec_to_json(spec: DarbouxSpec) -> dict:
    p = spec.params
    return {
        "alpha": rat_to_json(p.alpha),
        "beta": rat_to_json(p.beta),
        "eps": rat_to_json(p.eps),
        "k": spec.k,
        "l": spec.l,
        "A": [rat_to_json(x) for x in spec.A],
        "B": [rat_to_json(x) for x in spec.B],
        "C": [rat_to_json(x) for x in spec.C],
        "D": [rat_to_json(x) for x in spec.D],
    }


def spec_from_json(d) -> DarbouxSpec:
    """Parse a spec dictionary; raises ValueError/KeyError/TypeError on malformed input.

    Parameter conditions are checked by ParamSet (ConditionError) and the
    order range by DarbouxSpec (ScopeError).
    """
    if not isinstance(d, dict):
        raise ValueError("spec must be a JSON object")
    k, l = d.get("k", 0), d.get("l", 0)
    if not isinstance(k, int) or not isinstance(l, int) or isinstance(k, bool) or isinstance(l, bool):
        raise ValueError("k and l must be integers")
    params = ParamSet(rat_from_json(d["alpha"]), rat_from_json(d["beta"]), rat_from_json(d["eps"]))
    lists = {name: [rat_from_json(x) for x in d.get(name, [])] for name in "ABCD"}
    return DarbouxSpec(params, k, l, **lists)


def bundle_to_json(bundle: DarbouxBundle, jordan=None) -> dict:
    out = {
        "spec": spec_to_json(bundle.spec),
        "q": poly_to_json(bundle.q),
        "P": diffop_to_json(bundle.P),
        "L": diffop_to_json(bundle.L),
        "Q": diffop_to_json(bundle.Q),
        "L0": diffop_to_json(bundle.L0),
        "dets": [{"even": ratfunc_to_json(d.even), "odd": ratfunc_to_json(d.odd)} for d in bundle.dets],
    }
    if jordan is not None:
        out["jordan"] = [[rat_to_json(x) for x in row] for row in jordan]
    return out


def bundle_from_json(d) -> DarbouxBundle:
    spec = spec_from_json(d["spec"])
    dets = [SignedRatFunc(ratfunc_from_json(x["even"]), ratfunc_from_json(x["odd"])) for x in d["dets"]]
    return DarbouxBundle(
        spec,
        diffop_from_json(d["P"]),
        diffop_from_json(d["L"]),
        diffop_from_json(d["Q"]),
        dets,
        poly_from_json(d["q"], "x"),
        diffop_from_json(d["L0"]),
    )


def certificate_to_json(cert) -> dict:
    return {
        "B": diffopz_to_json(cert.Bdual),
        "eigen": poly_to_json(cert.eigen),
        "shift": cert.s,
        "verified_order": cert.verified_order,
        "lambda_params": {
            "alpha": rat_to_json(cert.params.alpha),
            "beta": rat_to_json(cert.params.beta),
            "eps": rat_to_json(cert.params.eps),
        },
        "lifted": cert.lifted,
    }


def dumps(obj) -> str:
    """Deterministic JSON text."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)

