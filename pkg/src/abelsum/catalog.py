"""Identity catalog: declarative entries, grids and grid verification.

Entries live in a TOML file (data/catalog.toml by default).  Each entry
pairs an LHS (term and weight DSL strings plus bounds) with an RHS
closed-form DSL string, a parameter grid and constraints.  verify()
compares the brute-force oracle against the RHS at every grid point;
verify_pipeline_agreement() additionally runs the derivation pipeline and
compares its output against the RHS.
"""

from __future__ import annotations

import itertools
import os
import time

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from dataclasses import dataclass, field as dc_field
from importlib import resources

from gmpy2 import mpq

from .dsl import (
    DslError,
    eval_closed,
    lower_linform,
    lower_scalar,
    parse_closed,
    parse_expr,
    parse_term,
    parse_weight,
)
from .oracle import OracleError, brute_eval, brute_eval_prefix_cubes
from .rationals import Rat, as_int
from .terms import Support


class CatalogError(Exception):
    pass


@dataclass(frozen=True)
class IdentitySpec:
    id: str
    rhs: str
    term: str = ""
    weight: str = "1"
    lower: str = "0"
    upper: str = "n"
    kind: str = "sum"             # sum | prefix-cubes
    params: dict = dc_field(default_factory=dict)   # name -> list of value strs
    constraints: tuple = ()       # e.g. ("n > p", "p >= 2")
    n_min: str = "0"              # expression in the parameters
    n_max: int = 12
    pipeline: str = "none"        # none | abel-gosper | abel-wz
    wz_f: str = ""                # closed-form term f(n) for the WZ pipeline
    wz_n0: str = "0"              # anchor n, expression in the parameters
    negative_control: bool = False
    note: str = ""


@dataclass
class PointRecord:
    n: int
    params: dict
    lhs: Rat | None
    rhs: Rat | None
    equal: bool
    via: str = "oracle"           # oracle | pipeline | brute-fallback
    error: str = ""


@dataclass
class VerificationReport:
    entry_id: str
    points: list = dc_field(default_factory=list)
    seconds: float = 0.0
    reduced: bool = False         # a pipeline degraded to reduced form

    @property
    def passed(self) -> bool:
        return bool(self.points) and all(p.equal for p in self.points)

    @property
    def first_failure(self) -> PointRecord | None:
        for p in self.points:
            if not p.equal:
                return p
        return None


# ---------------------------------------------------------------------------
# loading
# ---------------------------------------------------------------------------

CATALOG_ENV_VAR = "ABELSUM_CATALOG"


def default_catalog_path() -> str:
    env = os.environ.get(CATALOG_ENV_VAR)
    if env:
        return env
    return str(resources.files("abelsum").joinpath("data/catalog.toml"))


def load_catalog(path: str | None = None) -> dict:
    """id -> IdentitySpec, in file order."""
    path = path or default_catalog_path()
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except OSError as exc:
        raise CatalogError(f"cannot read catalog {path!r}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise CatalogError(f"malformed catalog {path!r}: {exc}") from exc
    out = {}
    for raw in doc.get("entry", []):
        try:
            spec = IdentitySpec(
                id=raw["id"],
                rhs=raw["rhs"],
                term=raw.get("term", ""),
                weight=raw.get("weight", "1"),
                lower=raw.get("lower", "0"),
                upper=raw.get("upper", "n"),
                kind=raw.get("kind", "sum"),
                params={k: list(v) for k, v in raw.get("params", {}).items()},
                constraints=tuple(raw.get("constraints", [])),
                n_min=str(raw.get("n_min", "0")),
                n_max=int(raw.get("n_max", 12)),
                pipeline=raw.get("pipeline", "none"),
                wz_f=raw.get("wz_f", ""),
                wz_n0=str(raw.get("wz_n0", "0")),
                negative_control=bool(raw.get("negative_control", False)),
                note=raw.get("note", ""),
            )
        except KeyError as exc:
            raise CatalogError(f"catalog entry missing field {exc}") from exc
        if spec.id in out:
            raise CatalogError(f"duplicate catalog id {spec.id!r}")
        out[spec.id] = spec
    if not out:
        raise CatalogError(f"no entries found in {path}")
    return out


# ---------------------------------------------------------------------------
# grids and constraints
# ---------------------------------------------------------------------------

_CMP_OPS = (">=", "<=", "!=", "==", ">", "<", "=")


def _check_constraint(src: str, env: dict) -> bool:
    for op in _CMP_OPS:
        if op in src:
            lhs, rhs = src.split(op, 1)
            a = eval_closed(parse_expr(lhs), env)
            b = eval_closed(parse_expr(rhs), env)
            return {
                ">=": a >= b,
                "<=": a <= b,
                "!=": a != b,
                "==": a == b,
                "=": a == b,
                ">": a > b,
                "<": a < b,
            }[op]
    raise CatalogError(f"constraint without comparison operator: {src!r}")


def param_combos(spec: IdentitySpec):
    """All parameter bindings (dict name -> mpq), in declaration order."""
    names = list(spec.params)
    value_lists = []
    for name in names:
        vals = [lower_scalar(parse_expr(v), {}) for v in spec.params[name]]
        value_lists.append(vals)
    for combo in itertools.product(*value_lists) if names else [()]:
        yield dict(zip(names, combo))


def grid_points(spec: IdentitySpec):
    """(n, params) tuples satisfying the constraints."""
    for params in param_combos(spec):
        nlo = as_int(lower_scalar(parse_expr(spec.n_min), params))
        for n in range(nlo, spec.n_max + 1):
            env = dict(params)
            env["n"] = mpq(n)
            if all(_check_constraint(c, env) for c in spec.constraints):
                yield n, params


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


def _lhs_objects(spec: IdentitySpec, params: dict):
    term = parse_term(spec.term, params)
    weight = parse_weight(spec.weight, params)
    lo = lower_linform(parse_expr(spec.lower), params)
    hi = lower_linform(parse_expr(spec.upper), params)
    return term, weight, Support(lo, hi)


def _lhs_value(spec: IdentitySpec, params: dict, n: int) -> Rat:
    if spec.kind == "prefix-cubes":
        return brute_eval_prefix_cubes(n)
    term, weight, support = _lhs_objects(spec, params)
    return brute_eval(term, weight, support, n)


def verify(spec: IdentitySpec) -> VerificationReport:
    """Oracle vs closed form at every grid point; exact equality."""
    t0 = time.perf_counter()
    report = VerificationReport(entry_id=spec.id)
    rhs_ast = parse_closed(spec.rhs)
    cache: dict = {}
    for n, params in grid_points(spec):
        key = tuple(sorted((k, str(v)) for k, v in params.items()))
        if spec.kind == "sum" and key not in cache:
            cache[key] = _lhs_objects(spec, params)
        try:
            if spec.kind == "prefix-cubes":
                lhs = brute_eval_prefix_cubes(n)
            else:
                term, weight, support = cache[key]
                lhs = brute_eval(term, weight, support, n)
            env = dict(params)
            env["n"] = mpq(n)
            rhs = eval_closed(rhs_ast, env)
        except (OracleError, DslError) as exc:
            report.points.append(
                PointRecord(n, dict(params), None, None, False, error=str(exc))
            )
            continue
        report.points.append(PointRecord(n, dict(params), lhs, rhs, lhs == rhs))
    report.seconds = time.perf_counter() - t0
    return report


def verify_pipeline_agreement(spec: IdentitySpec) -> VerificationReport:
    """Run the derivation pipeline once per parameter combination and
    compare its closed form against the catalog RHS on the grid.

    Points where the pipeline's closed form is undefined (for example the
    degenerate branch where the sum collapses to its lower bound) fall
    back to the brute-force value; degradation to reduced form is recorded
    in the report, not failed, as long as the values agree.
    """
    from .abel import AbelError, abel_gosper_pipeline, abel_wz_pipeline, SumSpec
    from .terms import EvalDomainError

    if spec.pipeline not in ("abel-gosper", "abel-wz"):
        raise CatalogError(f"entry {spec.id!r} is not pipeline-derivable")
    t0 = time.perf_counter()
    report = VerificationReport(entry_id=spec.id)
    rhs_ast = parse_closed(spec.rhs)
    by_combo: dict = {}
    for n, params in grid_points(spec):
        key = tuple(sorted((k, str(v)) for k, v in params.items()))
        by_combo.setdefault(key, (params, []))[1].append(n)
    for params, ns in by_combo.values():
        term, weight, support = _lhs_objects(spec, params)
        sumspec = SumSpec(term, weight, support)
        result = None
        if spec.pipeline == "abel-gosper":
            # a degenerate base point (pole in the summand's rational part)
            # is skipped in favour of the next grid value
            for base in sorted(ns):
                try:
                    result = abel_gosper_pipeline(sumspec, base_n=base)
                    break
                except (AbelError, EvalDomainError, ZeroDivisionError):
                    continue
        else:
            try:
                f = parse_term(spec.wz_f, params)
                n0 = as_int(lower_scalar(parse_expr(spec.wz_n0), params))
                s0 = brute_eval(term, weight, support, n0)
                result = abel_wz_pipeline(term, f, weight, s0, support, n0=n0)
            except (AbelError, EvalDomainError, ZeroDivisionError):
                result = None
        if result is not None:
            report.reduced = report.reduced or result.reduced
        for n in ns:
            env = dict(params)
            env["n"] = mpq(n)
            rhs = eval_closed(rhs_ast, env)
            via = "pipeline"
            try:
                if result is None:
                    raise AbelError("pipeline construction failed")
                lhs = result.ev(n)
            except (AbelError, EvalDomainError, ZeroDivisionError):
                lhs = brute_eval(term, weight, support, n)
                via = "brute-fallback"
            report.points.append(
                PointRecord(n, dict(params), lhs, rhs, lhs == rhs, via=via)
            )
    report.seconds = time.perf_counter() - t0
    return report
