"""Command-line front end.

Exit codes: 0 ok, 1 parse error, 2 inadmissible spec or violated parameter
conditions, 3 outside the supported scope, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import serialize as ser
from .bispectral import build_dual
from .darboux import (
    DarbouxBundle,
    auto_lift,
    build_bundle,
    build_f_basis,
    build_P_bar,
    build_P_tilde,
    jordan_matrix,
)
from .errors import (
    ConditionError,
    DegenerateKernelError,
    InadmissibleError,
    NotDivisibleError,
    NotInvariantError,
    ScopeError,
    VerificationError,
)
from .ndiff import apply, compose, involution_I, is_regular, poly_of_operator
from .params import rat_str

EXIT_OK, EXIT_PARSE, EXIT_CONDITIONS, EXIT_SCOPE, EXIT_VERIFY = 0, 1, 2, 3, 4

SCOPE_NOTE = (
    "only k <= |alpha| and l <= |beta| are supported: beyond that L0 restricted to the "
    "relevant generalized eigenspace has two Jordan blocks and the kernel description breaks down"
)


@dataclass
class RunConfig:
    command: str
    spec: str | None
    order: int = 48
    window: tuple[int, int] = (-8, 8)
    fmt: str = "json"
    eps: str | None = None
    B0: str | None = None
    B1: str | None = None

    def __post_init__(self):
        if self.order < 8:
            raise ValueError("--order must be at least 8")
        if self.window[0] > self.window[1]:
            raise ValueError("--window must be nonempty")

    @property
    def window_range(self):
        return range(self.window[0], self.window[1] + 1)


class CliError(Exception):
    def __init__(self, code: int, message: str, payload: dict | None = None):
        super().__init__(message)
        self.code = code
        self.payload = payload or {}


# -- input ---------------------------------------------------------------------------


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(EXIT_PARSE, f"{path} is not valid JSON: {exc}") from exc


def _parse_spec_dict(d):
    try:
        return ser.spec_from_json(d)
    except ConditionError as exc:
        raise CliError(EXIT_CONDITIONS, str(exc), {"violated": getattr(exc, "violated", None)}) from exc
    except ScopeError as exc:
        raise CliError(EXIT_SCOPE, f"{exc}", {"note": SCOPE_NOTE}) from exc
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise CliError(EXIT_PARSE, f"malformed spec: {exc!r}") from exc


def _build(spec) -> DarbouxBundle:
    try:
        return build_bundle(spec)
    except (InadmissibleError, DegenerateKernelError) as exc:
        raise CliError(EXIT_CONDITIONS, str(exc), {"witness": repr(getattr(exc, "witness", None))}) from exc
    except ScopeError as exc:
        raise CliError(EXIT_SCOPE, str(exc), {"note": SCOPE_NOTE}) from exc
    except (VerificationError, NotDivisibleError) as exc:
        raise CliError(EXIT_VERIFY, str(exc)) from exc


def _require_spec(cfg: RunConfig) -> str:
    if not cfg.spec:
        raise CliError(EXIT_PARSE, "--spec is required")
    return cfg.spec


# -- build ---------------------------------------------------------------------------


def cmd_build(cfg: RunConfig) -> dict:
    spec = _parse_spec_dict(_load_json(_require_spec(cfg)))
    bundle = _build(spec)
    return ser.bundle_to_json(bundle, jordan_matrix(spec))


# -- verify --------------------------------------------------------------------------


def _suite(name, fn, rows):
    try:
        ok, detail = fn()
    except (VerificationError, NotDivisibleError, NotInvariantError, ZeroDivisionError) as exc:
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    rows.append({"suite": name, "ok": bool(ok), "detail": detail})


def _series_suites(bundle: DarbouxBundle, cfg: RunConfig, rows):
    from .jacobi import B_op
    from .series import apply_n, hyp_family, psi_family
    from .exact import Poly

    p = bundle.spec.params
    N = cfg.order

    def hyp():
        from .series import verify_eigen_z

        fam = hyp_family(p, N + 4)
        rep = verify_eigen_z(B_op(p.alpha, p.beta), Poly.gen("x"), 0, fam, cfg.window_range, N, params=p)
        return rep.ok, f"B p = λ p through t^{rep.verified_order}"

    def psi():
        from flint import fmpq_poly

        fam = psi_family(bundle, p, N)
        worst = N
        for n in cfg.window_range:
            lhs = apply_n(bundle.L, fam, n)
            rhs = fam(n).mul_poly(fmpq_poly([1, -2]))
            res = lhs - rhs
            if not res.is_zero():
                return False, f"L Psi != z Psi at n={n}, exponent {res.first_nonzero()}"
            worst = min(worst, res.known)
        return True, f"L Psi = z Psi through t^{worst}"

    _suite("series: hypergeometric eigen-relation", hyp, rows)
    _suite("series: L Psi = z Psi", psi, rows)


def verify_bundle(bundle: DarbouxBundle, cfg: RunConfig, original_json: dict | None = None) -> dict:
    rows: list[dict] = []
    spec = bundle.spec
    L0, P, L, Q, q = bundle.L0, bundle.P, bundle.L, bundle.Q, bundle.q

    _suite("intertwining: L P = P L0", lambda: (compose(L, P) == compose(P, L0), ""), rows)
    _suite("factorization: Q P = q(L0)", lambda: (compose(Q, P) == poly_of_operator(q, L0), ""), rows)
    _suite("factorization: P Q = q(L)", lambda: (compose(P, Q) == poly_of_operator(q, L), ""), rows)

    def kernels():
        bad = [i for i, f in enumerate(build_f_basis(spec)) if not apply(P, f).is_zero()]
        return not bad, f"P f != 0 for basis index {bad}" if bad else f"{spec.order} kernel vectors"

    _suite("kernel: P f = 0", kernels, rows)

    def regular():
        ok, wit = is_regular(L)
        return ok, "" if ok else f"singular at {wit}"

    _suite("regularity of L", regular, rows)

    def rebuild():
        fresh = build_bundle(spec)
        if original_json is not None:
            same = ser.bundle_to_json(fresh) == {k: v for k, v in original_json.items() if k != "jordan"}
            return same, "" if same else "bundle differs from the one rebuilt from its spec"
        return True, ""

    _suite("rebuild from spec", rebuild, rows)

    notes = []
    work = bundle
    if spec.order % 2:
        try:
            work = auto_lift(bundle)
            wp = work.spec
            notes.append(
                f"auto-lift applied: (alpha, beta, k, l) = ({rat_str(wp.params.alpha)}, "
                f"{rat_str(wp.params.beta)}, {wp.k}, {wp.l})"
            )
        except ScopeError as exc:
            notes.append(f"auto-lift unavailable: {exc}")
            work = None
    if work is not None and spec.order > 0 and work.spec.params.alpha.denominator == 1:
        def inv():
            _, sign = build_P_tilde(work.spec)
            pb = build_P_bar(work.spec)
            ok = involution_I(pb.P_bar, work.spec.params) == pb.P_bar
            return ok, f"parity sign {sign}, shift s = {pb.s}"

        _suite("involution: P-bar is I-invariant", inv, rows)
    _series_suites(bundle, cfg, rows)
    ok = all(r["ok"] for r in rows)
    return {"ok": ok, "suites": rows, "notes": notes, "spec": ser.spec_to_json(spec)}


def cmd_verify(cfg: RunConfig) -> dict:
    d = _load_json(_require_spec(cfg))
    if isinstance(d, dict) and "P" in d and "spec" in d:
        spec = _parse_spec_dict(d["spec"])
        try:
            bundle = ser.bundle_from_json(d)
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise CliError(EXIT_PARSE, f"malformed bundle: {exc!r}") from exc
        original = d
    else:
        spec = _parse_spec_dict(d)
        bundle = _build(spec)
        original = None
    rep = verify_bundle(bundle, cfg, original)
    if not rep["ok"]:
        failed = [r["suite"] for r in rep["suites"] if not r["ok"]]
        raise CliError(EXIT_VERIFY, f"failed suites: {', '.join(failed)}", rep)
    return rep


# -- dual ----------------------------------------------------------------------------


def cmd_dual(cfg: RunConfig) -> dict:
    spec = _parse_spec_dict(_load_json(_require_spec(cfg)))
    bundle = _build(spec)
    try:
        cert = build_dual(bundle, order=cfg.order, window=cfg.window_range)
    except ScopeError as exc:
        raise CliError(EXIT_SCOPE, str(exc), {"note": SCOPE_NOTE}) from exc
    except (VerificationError, NotDivisibleError, NotInvariantError) as exc:
        raise CliError(EXIT_VERIFY, str(exc)) from exc
    return ser.certificate_to_json(cert)


# -- worked example ------------------------------------------------------------------


def cmd_reproduce_example(cfg: RunConfig) -> dict:
    from .example52 import all_passed, reproduce

    if cfg.spec:
        spec = _parse_spec_dict(_load_json(cfg.spec))
        p = spec.params
        if (p.alpha, p.beta, spec.k, spec.l) != (2, 0, 2, 0) or spec.A != (1, 0):
            raise CliError(EXIT_SCOPE, "the worked example needs alpha=2, beta=0, k=2, l=0, A=(1,0)")
        eps, B0, B1 = p.eps, spec.B[0], spec.B[1]
    else:
        try:
            eps = Fraction(cfg.eps or "1/3")
            B0 = Fraction(cfg.B0 or "2")
            B1 = Fraction(cfg.B1 or "5/7")
        except (ValueError, ZeroDivisionError) as exc:
            raise CliError(EXIT_PARSE, f"bad rational: {exc}") from exc
        try:
            from .params import ParamSet

            ParamSet(2, 0, eps)
        except ConditionError as exc:
            raise CliError(EXIT_CONDITIONS, str(exc)) from exc
    w = range(max(cfg.window[0], -6), min(cfg.window[1], 6) + 1)
    rows = reproduce(eps, B0, B1, order=min(cfg.order, 40), window=w)
    rep = {"eps": ser.rat_to_json(eps), "B0": ser.rat_to_json(B0), "B1": ser.rat_to_json(B1),
           "ok": all_passed(rows), "checks": rows}
    if not rep["ok"]:
        bad = [r["check"] for r in rows if not r["ok"] and not r["informational"]]
        raise CliError(EXIT_VERIFY, f"printed data mismatches: {', '.join(bad)}", rep)
    return rep


# -- output --------------------------------------------------------------------------


def _text(obj, indent=0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        if "suite" in obj or "check" in obj:
            name = obj.get("suite", obj.get("check"))
            tag = "PASS" if obj["ok"] else "FAIL"
            extra = " (informational)" if obj.get("informational") else ""
            detail = f"  {obj['detail']}" if obj.get("detail") else ""
            return f"{pad}{tag} {name}{extra}{detail}"
        lines = []
        for k in obj:
            v = obj[k]
            if isinstance(v, (dict, list)) and not v:
                lines.append(f"{pad}{k}: []" if isinstance(v, list) else f"{pad}{k}: {{}}")
            elif isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(_text(x, indent) for x in obj)
    return f"{pad}{obj}"


def _emit(obj, fmt: str, stream) -> None:
    stream.write((ser.dumps(obj) if fmt == "json" else _text(obj)) + "\n")


COMMANDS = {
    "build": cmd_build,
    "verify": cmd_verify,
    "dual": cmd_dual,
    "reproduce-5-2": cmd_reproduce_example,
}


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jacobi-darboux", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--spec", help="spec JSON (or bundle JSON for verify)")
        sp.add_argument("--order", type=int, default=48, metavar="N", help="series truncation order")
        sp.add_argument("--window", type=int, nargs=2, default=(-8, 8), metavar=("A", "B"))
        sp.add_argument("--format", choices=("json", "text"), default="json")
        if name == "reproduce-5-2":
            sp.add_argument("--eps")
            sp.add_argument("--B0")
            sp.add_argument("--B1")
    return ap


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        cfg = RunConfig(args.command, args.spec, args.order, tuple(args.window), args.format,
                        getattr(args, "eps", None), getattr(args, "B0", None), getattr(args, "B1", None))
    except ValueError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    try:
        out = COMMANDS[cfg.command](cfg)
    except CliError as exc:
        stderr.write(f"error: {exc}\n")
        if exc.payload:
            _emit({"error": str(exc), "exit_code": exc.code, **exc.payload}, cfg.fmt, stdout)
        return exc.code
    _emit(out, cfg.fmt, stdout)
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
