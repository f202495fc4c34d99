"""Command-line interface.

Subcommands: gosper, zeilberger, wz, sum, abel-step, verify, catalog.
Exit codes: 0 success/pass, 1 verification failure, 2 not summable or not
found, 3 input error.  With --json every command emits a single JSON
document with stable field names; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from gmpy2 import mpq

from .abel import (
    AbelError,
    GosperFailed,
    SumSpec,
    abel_gosper_pipeline,
    abel_step,
    ProofTrace,
)
from .catalog import (
    CatalogError,
    load_catalog,
    verify,
    verify_pipeline_agreement,
)
from .dsl import DslError, lower_linform, parse_expr, parse_term, parse_weight
from .gosper import GosperError, gosper
from .oracle import OracleError
from .poly import QN, RatFunc, UniPoly
from .rationals import Rat
from .terms import Support, TermError
from .weights import WeightError
from .zeilberger import ZeilbergerError, wz_certify, zeilberger

EXIT_PASS = 0
EXIT_VERIFY_FAIL = 1
EXIT_NOT_SUMMABLE = 2
EXIT_INPUT_ERROR = 3


class CliInputError(Exception):
    pass


def _parse_params(pairs) -> dict:
    out = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise CliInputError(f"--param expects name=value, got {pair!r}")
        name, _, val = pair.partition("=")
        try:
            out[name.strip()] = mpq(val.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise CliInputError(f"bad parameter value {val!r}: {exc}") from exc
    return out


def _ratfunc_str(r: RatFunc) -> str:
    from .dsl import render_ratfunc

    return render_ratfunc(r)


def _poly_n_str(p: UniPoly) -> str:
    from .dsl import _render_qq_poly

    return _render_qq_poly(p)


def _emit(doc: dict, as_json: bool, human_lines) -> None:
    if as_json:
        print(json.dumps(doc, indent=2))
    else:
        for line in human_lines:
            print(line)


def _trace_doc(trace: ProofTrace):
    return [{"kind": s.kind, "description": s.description} for s in trace.steps]


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_gosper(args) -> int:
    params = _parse_params(args.param)
    term = parse_term(args.term, params)
    cert = gosper(term.ratio_k())
    if cert is None:
        _emit(
            {"command": "gosper", "summable": False},
            args.json,
            ["not summable: no hypergeometric antidifference exists"],
        )
        return EXIT_NOT_SUMMABLE
    cs = _ratfunc_str(cert)
    _emit(
        {"command": "gosper", "summable": True, "certificate": cs},
        args.json,
        [f"certificate R(k) = {cs}", "antidifference a(n,k) = R(k) * t(n,k)"],
    )
    return EXIT_PASS


def cmd_zeilberger(args) -> int:
    params = _parse_params(args.param)
    term = parse_term(args.term, params)
    rec = zeilberger(term, max_order=args.max_order)
    if rec is None:
        _emit(
            {"command": "zeilberger", "found": False},
            args.json,
            [f"no telescoper of order <= {args.max_order}"],
        )
        return EXIT_NOT_SUMMABLE
    coeffs = [_poly_n_str(c) for c in rec.coeffs]
    cs = _ratfunc_str(rec.certificate)
    human = [f"order {rec.order} recurrence:"]
    human.append(
        "  "
        + " + ".join(f"({c}) * S(n+{j})" for j, c in enumerate(coeffs))
        + " = 0 (up to telescoped boundary terms)"
    )
    human.append(f"certificate G/F = {cs}")
    _emit(
        {
            "command": "zeilberger",
            "found": True,
            "recurrence": {"order": rec.order, "coeffs": coeffs},
            "certificate": cs,
        },
        args.json,
        human,
    )
    return EXIT_PASS


def cmd_wz(args) -> int:
    params = _parse_params(args.param)
    F = parse_term(args.term, params)
    f = parse_term(args.closed_form, params)
    pair = wz_certify(F, f)
    if pair is None:
        _emit(
            {"command": "wz", "found": False},
            args.json,
            ["no WZ certificate for F/f"],
        )
        return EXIT_NOT_SUMMABLE
    cs = _ratfunc_str(pair.g_over_f)
    _emit(
        {"command": "wz", "found": True, "certificate": cs},
        args.json,
        [f"certificate G/(F/f) = {cs}"],
    )
    return EXIT_PASS


def cmd_sum(args) -> int:
    params = _parse_params(args.param)
    term = parse_term(args.term, params)
    weight = parse_weight(args.weight, params) if args.weight else None
    lo = lower_linform(parse_expr(getattr(args, "from")), params)
    hi = lower_linform(parse_expr(args.to), params)
    support = Support(lo, hi)
    from .weights import WeightExpr

    spec = SumSpec(term, weight if weight is not None else WeightExpr.one(), support)
    result = abel_gosper_pipeline(spec)
    doc = {
        "command": "sum",
        "reduced": result.reduced,
        "closed_form": result.closed_form.render(),
    }
    human = [f"closed form: {result.closed_form.render()}"]
    if result.reduced:
        human.append("note: some residual sums stayed in reduced form")
    if args.n is not None:
        val = result.ev(args.n)
        doc["value_at_n"] = {"n": args.n, "value": str(val)}
        human.append(f"value at n = {args.n}: {val}")
    if args.trace:
        doc["trace"] = _trace_doc(result.trace)
        human.append("trace:")
        human.extend("  " + line for line in result.trace.render().splitlines())
    _emit(doc, args.json, human)
    return EXIT_PASS


def cmd_abel_step(args) -> int:
    params = _parse_params(args.param)
    term = parse_term(args.term, params)
    weight = parse_weight(args.weight, params)
    lo = lower_linform(parse_expr(getattr(args, "from")), params)
    hi = lower_linform(parse_expr(args.to), params)
    spec = SumSpec(term, weight, Support(lo, hi))
    trace = ProofTrace()
    transformed, boundary = abel_step(spec, trace)
    doc = {
        "command": "abel-step",
        "transformed_count": len(transformed),
        "transformed": [
            {"weight": s.weight.render(), "certificate_term": _ratfunc_str(s.term.rational)}
            for s in transformed
        ],
        "boundary": boundary.render(),
        "trace": _trace_doc(trace),
    }
    human = [f"{len(transformed)} transformed sum(s); boundary: {boundary.render()}"]
    for s in transformed:
        human.append(f"  weight {s.weight.render()}")
    _emit(doc, args.json, human)
    return EXIT_PASS


def _report_doc(r, kind: str):
    doc = {
        "entry": r.entry_id,
        "kind": kind,
        "passed": r.passed,
        "points": len(r.points),
        "seconds": round(r.seconds, 4),
    }
    if kind == "pipeline":
        doc["reduced"] = r.reduced
    ff = r.first_failure
    if ff is not None:
        doc["first_failure"] = {
            "n": ff.n,
            "params": {k: str(v) for k, v in ff.params.items()},
            "lhs": None if ff.lhs is None else str(ff.lhs),
            "rhs": None if ff.rhs is None else str(ff.rhs),
            "error": ff.error,
        }
    return doc


def cmd_verify(args) -> int:
    if args.file:
        cat = load_catalog(args.file)
        specs = [s for s in cat.values() if not s.negative_control]
        return _run_verify(args, specs)
    cat = load_catalog(args.catalog)
    if args.id:
        if args.id not in cat:
            print(f"unknown catalog id {args.id!r}", file=sys.stderr)
            return EXIT_NOT_SUMMABLE
        specs = [cat[args.id]]
    elif args.all:
        specs = [s for s in cat.values() if not s.negative_control]
    else:
        raise CliInputError("verify needs --id, --all, or --file")
    return _run_verify(args, specs)


def _run_verify(args, specs) -> int:
    reports = []
    ok = True
    for spec in specs:
        if args.pipeline and spec.pipeline != "none":
            r = verify_pipeline_agreement(spec)
            reports.append(_report_doc(r, "pipeline"))
        else:
            r = verify(spec)
            reports.append(_report_doc(r, "oracle"))
        ok = ok and r.passed
    human = []
    for doc in reports:
        status = "pass" if doc["passed"] else "FAIL"
        line = f"{doc['entry']:24s} {status}  {doc['points']} points  {doc['seconds']}s"
        if doc.get("reduced"):
            line += "  (reduced form)"
        human.append(line)
        if "first_failure" in doc:
            ff = doc["first_failure"]
            human.append(
                f"  first failure at n={ff['n']} params={ff['params']}: "
                f"lhs={ff['lhs']} rhs={ff['rhs']} {ff['error']}"
            )
    _emit({"command": "verify", "report": reports, "passed": ok}, args.json, human)
    return EXIT_PASS if ok else EXIT_VERIFY_FAIL


def cmd_catalog(args) -> int:
    cat = load_catalog(args.catalog)
    if args.action != "list":
        raise CliInputError(f"unknown catalog action {args.action!r}")
    entries = [
        {
            "id": s.id,
            "pipeline": s.pipeline,
            "negative_control": s.negative_control,
            "note": s.note,
        }
        for s in cat.values()
    ]
    human = [
        f"{e['id']:24s} pipeline={e['pipeline']:12s}"
        + (" [negative control]" if e["negative_control"] else "")
        for e in entries
    ]
    _emit({"command": "catalog-list", "entries": entries}, args.json, human)
    return EXIT_PASS


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="abelsum",
        description="Exact summation of hypergeometric sums with harmonic weights",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--param", action="append", metavar="NAME=VALUE",
                       help="bind a named parameter to a rational value")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("gosper", help="indefinite summation certificate")
    p.add_argument("--term", required=True)
    common(p)
    p.set_defaults(func=cmd_gosper)

    p = sub.add_parser("zeilberger", help="telescoping recurrence for a definite sum")
    p.add_argument("--term", required=True)
    p.add_argument("--max-order", type=int, default=3)
    common(p)
    p.set_defaults(func=cmd_zeilberger)

    p = sub.add_parser("wz", help="certificate for a sum with known closed form")
    p.add_argument("--term", required=True, help="the summand F(n,k)")
    p.add_argument("--closed-form", required=True,
                   help="the closed form f(n) of sum_k F(n,k), as a term in n")
    common(p)
    p.set_defaults(func=cmd_wz)

    p = sub.add_parser("sum", help="evaluate a weighted sum in closed form")
    p.add_argument("--term", required=True)
    p.add_argument("--weight", default="")
    p.add_argument("--from", required=True, metavar="LOW")
    p.add_argument("--to", required=True, metavar="HIGH")
    p.add_argument("--n", type=int, default=None,
                   help="also evaluate the closed form at this n")
    p.add_argument("--trace", action="store_true", help="include the proof trace")
    common(p)
    p.set_defaults(func=cmd_sum)

    p = sub.add_parser("abel-step", help="one summation-by-parts transform")
    p.add_argument("--term", required=True)
    p.add_argument("--weight", required=True)
    p.add_argument("--from", required=True, metavar="LOW")
    p.add_argument("--to", required=True, metavar="HIGH")
    common(p)
    p.set_defaults(func=cmd_abel_step)

    p = sub.add_parser("verify", help="check catalog identities against the oracle")
    p.add_argument("--id", default=None)
    p.add_argument("--all", action="store_true")
    p.add_argument("--file", default=None, metavar="PATH",
                   help="verify every entry of this catalog file")
    p.add_argument("--pipeline", action="store_true",
                   help="use pipeline agreement instead of the plain oracle check")
    p.add_argument("--catalog", default=None, help="path to an alternate catalog file")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("catalog", help="catalog inspection")
    p.add_argument("action", choices=["list"])
    p.add_argument("--catalog", default=None)
    common(p)
    p.set_defaults(func=cmd_catalog)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (CliInputError, DslError, TermError, WeightError, CatalogError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (GosperFailed,) as exc:
        print(f"not summable: {exc}", file=sys.stderr)
        return EXIT_NOT_SUMMABLE
    except (GosperError, ZeilbergerError, AbelError, OracleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_SUMMABLE


if __name__ == "__main__":
    sys.exit(main())
