"""Abel-lemma transforms: the Abel-Gosper and Abel-WZ pipelines.

The single transform step rewrites  sum b_k Delta(a_k)  as
 -sum a_{k+1} Delta(b_k)  plus the two boundary values, with a_k coming
from a Gosper certificate.  Iterating strips one harmonic factor per step;
the residual hypergeometric sums are finished off by a second Gosper pass
or by a first-order Zeilberger recurrence anchored at an initial value.

Closed forms are assembled as evaluable expression nodes; every node
evaluates exactly (rational arithmetic) at any admissible integer n.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from gmpy2 import mpq

from .dsl import render_ratfunc
from .gosper import antidifference, gosper
from .poly import QN, RatFunc, UniPoly
from .rationals import Rat
from .terms import EvalDomainError, LinearForm, Support, TermExpr, rf2_eval
from .weights import WeightExpr, delta_weight, harmonic_eval
from .zeilberger import Recurrence, zeilberger


class AbelError(Exception):
    pass


class GosperFailed(AbelError):
    """The hypergeometric factor of a weighted sum is not Gosper-summable."""


@dataclass(frozen=True)
class SumSpec:
    """A weighted hypergeometric sum over explicit bounds."""

    term: TermExpr
    weight: WeightExpr
    support: Support

    def brute(self, n: int) -> Rat:
        """Direct term-by-term evaluation (used for initial values and
        self-checks inside the pipelines; the verification oracle has its
        own independent copy)."""
        lo, hi = self.support.at(n)
        total = mpq(0)
        for k in range(lo, hi + 1):
            total += self.term.eval(n, k) * self.weight.eval(n, k)
        return total


@dataclass
class TraceStep:
    kind: str          # gosper-certificate | abel-step | zeilberger-recurrence
    #                  | initial-value | closed-form-assembly
    description: str
    payload: dict = dc_field(default_factory=dict)
    check: object = None  # optional callable n -> bool


@dataclass
class ProofTrace:
    steps: list = dc_field(default_factory=list)

    def add(self, kind: str, description: str, payload=None, check=None):
        self.steps.append(TraceStep(kind, description, payload or {}, check))

    def replay(self, n_values) -> bool:
        """Re-run every recorded assertion at the given sample points."""
        for step in self.steps:
            if step.check is None:
                continue
            for n in n_values:
                if not step.check(n):
                    return False
        return True

    def render(self) -> str:
        lines = []
        for i, s in enumerate(self.steps, 1):
            lines.append(f"{i}. [{s.kind}] {s.description}")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# closed-form expression nodes (exact evaluation at integer n)
# ---------------------------------------------------------------------------


class ClosedForm:
    reduced = False

    def ev(self, n: int) -> Rat:
        raise NotImplementedError

    def render(self) -> str:
        raise NotImplementedError


@dataclass
class CFSum(ClosedForm):
    parts: list

    @property
    def reduced(self):
        return any(p.reduced for p in self.parts)

    def ev(self, n: int) -> Rat:
        total = mpq(0)
        for p in self.parts:
            total += p.ev(n)
        return total

    def render(self) -> str:
        if not self.parts:
            return "0"
        return " + ".join(f"({p.render()})" for p in self.parts)


def eval_telescoped(value_fn, delta_fn, k0: int, radius: int = 60) -> Rat:
    """value(k0), falling back to a nearby pole-free point plus partial
    sums of the forward difference when direct evaluation hits a pole."""
    try:
        return value_fn(k0)
    except EvalDomainError:
        pass
    for k1 in range(k0 - 1, k0 - radius, -1):
        try:
            base = value_fn(k1)
            for j in range(k1, k0):
                base += delta_fn(j)
        except EvalDomainError:
            continue
        return base
    for k1 in range(k0 + 1, k0 + radius):
        try:
            base = value_fn(k1)
            for j in range(k0, k1):
                base -= delta_fn(j)
        except EvalDomainError:
            continue
        return base
    raise AbelError(f"no pole-free evaluation point near k={k0}")


@dataclass
class CFAbelBoundary(ClosedForm):
    """a_{hi+1} b_{hi+1} - a_{lo} b_{lo} for one Abel step."""

    anti: TermExpr      # a = R * f
    base: TermExpr      # f, with Delta a = f
    atoms: tuple
    support: Support

    def _value(self, n: int, k0: int) -> Rat:
        a = eval_telescoped(
            lambda k: self.anti.eval(n, k),
            lambda k: self.base.eval(n, k),
            k0,
        )
        for atom in self.atoms:
            if not a:
                return a
            a *= harmonic_eval(atom, n, k0)
        return a

    def ev(self, n: int) -> Rat:
        lo, hi = self.support.at(n)
        return self._value(n, hi + 1) - self._value(n, lo)

    def render(self) -> str:
        lo = self.support.lower.render()
        hi = self.support.upper.render()
        w = "*".join(a.render() for a in self.atoms) or "1"
        return f"(a*{w})(n, k={hi}+1) - (a*{w})(n, k={lo})  [Abel boundary]"


@dataclass
class CFAntidiffValue(ClosedForm):
    """Value of an indefinite hypergeometric sum: a(hi+1) - a(lo)."""

    anti: TermExpr
    base: TermExpr
    support: Support

    def ev(self, n: int) -> Rat:
        lo, hi = self.support.at(n)

        def val(k0):
            return eval_telescoped(
                lambda k: self.anti.eval(n, k),
                lambda k: self.base.eval(n, k),
                k0,
            )

        return val(hi + 1) - val(lo)

    def render(self) -> str:
        lo = self.support.lower.render()
        hi = self.support.upper.render()
        return f"a(n, k={hi}+1) - a(n, k={lo})  [telescoped residual]"


@dataclass
class RecurrenceBoundary:
    """Right-hand side of the summed telescoping identity

        s1(n) S(n+1) + s0(n) S(n) = G(n, B+1) - G(n, A) - s0 E0 - s1 E1

    where [A, B] covers the bounds at n and n+1 and E0/E1 collect summand
    values over the range extensions.  Zero whenever the explicit bounds
    cover the natural support, but computed rather than assumed."""

    term: TermExpr
    g_term: TermExpr  # certificate * term
    rec: Recurrence
    support: Support

    def _g_value(self, n: int, k0: int) -> Rat:
        s0, s1 = self.rec.coeffs
        c0 = s0.eval_at(mpq(n))
        c1 = s1.eval_at(mpq(n))

        def delta(k):
            return c0 * self.term.eval(n, k) + c1 * self.term.eval(n + 1, k)

        return eval_telescoped(lambda k: self.g_term.eval(n, k), delta, k0)

    def ev(self, n: int) -> Rat:
        lo0, hi0 = self.support.at(n)
        lo1, hi1 = self.support.at(n + 1)
        lo, hi = min(lo0, lo1), max(hi0, hi1)
        s0, s1 = self.rec.coeffs
        total = self._g_value(n, hi + 1) - self._g_value(n, lo)
        c0 = s0.eval_at(mpq(n))
        c1 = s1.eval_at(mpq(n))
        for k in range(lo, hi + 1):
            if not (lo0 <= k <= hi0):
                total -= c0 * self.term.eval(n, k)
            if not (lo1 <= k <= hi1):
                total -= c1 * self.term.eval(n + 1, k)
        return total


@dataclass
class CFRecurrenceSum(ClosedForm):
    """Residual definite sum evaluated through a first-order recurrence
    anchored at an exactly computed initial value."""

    spec: SumSpec
    rec: Recurrence
    base_n: int
    initial: Rat
    boundary: RecurrenceBoundary

    def __post_init__(self):
        self._cache = {self.base_n: mpq(self.initial)}
        self._top = self.base_n

    def ev(self, n: int) -> Rat:
        if n < self.base_n:
            return self.spec.brute(n)
        if n in self._cache:
            return self._cache[n]
        s0, s1 = self.rec.coeffs
        while self._top < n:
            m = self._top
            d = s1.eval_at(mpq(m))
            if not d:
                raise AbelError(f"recurrence leading coefficient vanishes at n={m}")
            rhs = self.boundary.ev(m) - s0.eval_at(mpq(m)) * self._cache[m]
            self._cache[m + 1] = rhs / d
            self._top = m + 1
        return self._cache[n]

    def render(self) -> str:
        from .dsl import render_poly_n

        s0, s1 = self.rec.coeffs
        return (
            f"S(n) with ({render_poly_n(s1)})*S(n+1) + ({render_poly_n(s0)})*S(n)"
            f" = boundary(n), S({self.base_n}) = {self.initial}"
        )


@dataclass
class CFDirectSum(ClosedForm):
    """Residual sum left in reduced (explicit finite sum) form."""

    spec: SumSpec
    reduced = True

    def ev(self, n: int) -> Rat:
        return self.spec.brute(n)

    def render(self) -> str:
        return "residual finite sum (reduced form)"


# ---------------------------------------------------------------------------
# the Abel step
# ---------------------------------------------------------------------------


def split_monomials(spec: SumSpec) -> list[SumSpec]:
    """One SumSpec per weight monomial, coefficient folded into the term."""
    out = []
    for atoms, coeff in spec.weight.monomials:
        out.append(
            SumSpec(
                term=spec.term.times_ratfunc(coeff),
                weight=WeightExpr.from_atoms(*atoms),
                support=spec.support,
            )
        )
    return out


def abel_step(spec: SumSpec, trace: ProofTrace | None = None):
    """One summation-by-parts transform.

    Returns (transformed specs, boundary closed form).  Each returned spec
    has strictly smaller harmonic degree.  Raises GosperFailed when the
    hypergeometric factor admits no antidifference, and AbelError when the
    weight has degree 0 (nothing to strip).
    """
    if spec.weight.degree() < 1:
        raise AbelError("abel_step requires a weight of harmonic degree >= 1")
    transformed = []
    boundary_parts = []
    for sub in split_monomials(spec):
        atoms = sub.weight.monomials[0][0]
        f = sub.term
        cert = gosper(f.ratio_k())
        if cert is None:
            raise GosperFailed("weighted term is not Gosper-summable")
        anti = f.times_ratfunc(cert)
        if trace is not None:
            trace.add(
                "gosper-certificate",
                f"antidifference certificate R(k) = {render_ratfunc(cert)}",
                {"certificate": cert},
                check=_make_gosper_check(anti, f, spec.support),
            )
        dw = delta_weight(atoms)
        anti_next = anti.shift_k(1)
        for atoms2, dcoeff in dw.monomials:
            newterm = anti_next.times_ratfunc(dcoeff).times_const(-1)
            transformed.append(
                SumSpec(newterm, WeightExpr.from_atoms(*atoms2), sub.support)
            )
        boundary_parts.append(CFAbelBoundary(anti, f, atoms, sub.support))
    boundary = CFSum(boundary_parts)
    if trace is not None:
        trace.add(
            "abel-step",
            f"summation by parts: {len(transformed)} transformed sum(s) "
            "plus boundary values",
            {"boundary": boundary},
            check=_make_abel_check(spec, transformed, boundary),
        )
    return transformed, boundary


def _make_gosper_check(anti: TermExpr, base: TermExpr, support: Support):
    def check(n: int) -> bool:
        lo, hi = support.at(n)
        ks = range(lo, min(hi, lo + 5) + 1)
        for k in ks:
            try:
                if anti.eval(n, k + 1) - anti.eval(n, k) != base.eval(n, k):
                    return False
            except EvalDomainError:
                continue
        return True

    return check


def _make_abel_check(spec: SumSpec, transformed, boundary):
    def check(n: int) -> bool:
        total = boundary.ev(n)
        for t in transformed:
            total += t.brute(n)
        return total == spec.brute(n)

    return check


# ---------------------------------------------------------------------------
# Abel-Gosper pipeline
# ---------------------------------------------------------------------------


@dataclass
class PipelineResult:
    closed_form: ClosedForm
    trace: ProofTrace

    @property
    def reduced(self) -> bool:
        return self.closed_form.reduced

    def ev(self, n: int) -> Rat:
        return self.closed_form.ev(n)


def abel_gosper_pipeline(spec: SumSpec, base_n: int | None = None) -> PipelineResult:
    """Iterate Abel steps until all weights have degree 0, then evaluate
    the residual hypergeometric sums.

    base_n anchors recurrence-solved residuals (the smallest n for which
    the sum is considered; defaults to the value of the lower bound at
    n = 0 plus one, which suits sums from k = p to n).
    """
    trace = ProofTrace()
    parts: list = []
    queue = split_monomials(spec)
    while queue:
        sub = queue.pop(0)
        deg = sub.weight.degree()
        if deg >= 1:
            try:
                transformed, boundary = abel_step(sub, trace)
            except GosperFailed:
                # no antidifference for this factor: leave the weighted sum
                # in reduced form (it is still exactly evaluable)
                trace.add(
                    "closed-form-assembly",
                    "irreducible weighted sum kept in reduced form",
                )
                parts.append(
                    CFDirectSum(sub)
                )
                continue
            parts.append(boundary)
            queue.extend(transformed)
        else:
            parts.append(_finish_residual(sub, base_n, trace))
    cf = CFSum(parts)
    trace.add(
        "closed-form-assembly",
        f"closed form with {len(parts)} part(s): {cf.render()}",
        {"closed_form": cf},
    )
    return PipelineResult(cf, trace)


def _finish_residual(sub: SumSpec, base_n: int | None, trace: ProofTrace) -> ClosedForm:
    """Evaluate a degree-0 (purely hypergeometric) residual sum."""
    term = sub.term
    anti = antidifference(term)
    if anti is not None:
        trace.add(
            "gosper-certificate",
            f"residual sum telescopes: R(k) = {render_ratfunc(anti.rational)}",
            check=_make_gosper_check(anti, term, sub.support),
        )
        return CFAntidiffValue(anti, term, sub.support)
    rec = zeilberger(term, max_order=3)
    if rec is not None and rec.order == 1:
        n0 = base_n if base_n is not None else sub.support.lower.eval_int(0) + 1
        init = sub.brute(n0)
        bnd = RecurrenceBoundary(
            term=term,
            g_term=term.times_ratfunc(rec.certificate),
            rec=rec,
            support=sub.support,
        )
        ok = _recurrence_consistent(sub, rec, bnd, n0)
        if ok:
            trace.add(
                "zeilberger-recurrence",
                f"residual sum satisfies ({rec.coeffs[1]!r})*S(n+1) "
                f"+ ({rec.coeffs[0]!r})*S(n) = boundary(n)",
                {"recurrence": rec},
                check=lambda n, _s=sub, _r=rec, _b=bnd: _check_rec_point(
                    _s, _r, _b, n
                ),
            )
            trace.add("initial-value", f"S({n0}) = {init}")
            return CFRecurrenceSum(sub, rec, n0, init, bnd)
    trace.add(
        "closed-form-assembly",
        "residual sum kept in reduced form (no order-1 telescoper)",
    )
    return CFDirectSum(sub)


def _check_rec_point(
    sub: SumSpec, rec: Recurrence, bnd: RecurrenceBoundary, n: int
) -> bool:
    s0, s1 = rec.coeffs
    lhs = s1.eval_at(mpq(n)) * sub.brute(n + 1) + s0.eval_at(mpq(n)) * sub.brute(n)
    return lhs == bnd.ev(n)


def _recurrence_consistent(
    sub: SumSpec, rec: Recurrence, bnd: RecurrenceBoundary, n0: int
) -> bool:
    """The summed telescoping identity carries boundary terms whenever the
    explicit bounds do not cover the natural support; accept the recurrence
    only after it reproduces the brute-force sums on a few points."""
    s0, s1 = rec.coeffs
    for n in range(n0, n0 + 4):
        if not s1.eval_at(mpq(n)):
            return False
        try:
            if not _check_rec_point(sub, rec, bnd, n):
                return False
        except (AbelError, EvalDomainError):
            return False
    return True


# ---------------------------------------------------------------------------
# Abel-WZ pipeline
# ---------------------------------------------------------------------------


@dataclass
class WZIdentity(ClosedForm):
    """S(n) = f(n) * (S(n0)/f(n0) + sum_{j=n0..n-1} U(j))."""

    f: TermExpr
    n0: int
    s0: Rat
    u: "WZDifference"

    def __post_init__(self):
        f0 = self.f.eval(self.n0, 0)
        if not f0:
            raise AbelError(f"closed form vanishes at n={self.n0}")
        self._partial = {self.n0: mpq(self.s0) / f0}
        self._top = self.n0

    @property
    def reduced(self):
        return self.u.reduced

    def ev(self, n: int) -> Rat:
        if n < self.n0:
            raise AbelError(f"identity anchored at n={self.n0}; got n={n}")
        while self._top < n:
            m = self._top
            self._partial[m + 1] = self._partial[m] + self.u.ev(m)
            self._top = m + 1
        return self.f.eval(n, 0) * self._partial[n]

    def render(self) -> str:
        return (
            f"S(n) = f(n) * (S({self.n0})/f({self.n0}) "
            f"+ sum_(j={self.n0})^(n-1) U(j)) with U(j) = {self.u.render()}"
        )


@dataclass
class WZDifference(ClosedForm):
    """U(n) = sum_k (G(n,k+1) - G(n,k)) b_k, computed by Abel's lemma as
    -sum_k G(n,k+1) Delta(b_k) plus the boundary values of G * b."""

    g_term: TermExpr     # G = (G/F) * F/f
    fhat: TermExpr       # F/f  (drives pole-free evaluation of G)
    fhat_next: TermExpr  # F/f at n+1
    atoms: tuple
    pieces: list         # (delta_coeff, u_term, anti_or_None)
    support: Support

    @property
    def reduced(self):
        return any(anti is None for _, _, anti in self.pieces)

    def _g_value(self, n: int, k0: int) -> Rat:
        return eval_telescoped(
            lambda k: self.g_term.eval(n, k),
            lambda k: self.fhat_next.eval(n, k) - self.fhat.eval(n, k),
            k0,
        )

    def ev(self, n: int) -> Rat:
        lo0, hi0 = self.support.at(n)
        lo1, hi1 = self.support.at(n + 1)
        lo, hi = min(lo0, lo1), max(hi0, hi1)
        total = mpq(0)
        for dcoeff, u_term, anti in self.pieces:
            if anti is not None:
                def val(k0, _a=anti, _u=u_term):
                    return eval_telescoped(
                        lambda k: _a.eval(n, k),
                        lambda k: _u.eval(n, k),
                        k0,
                    )

                total += val(hi + 1) - val(lo)
            else:
                # G(n, k+1) evaluated through the pole-safe fallback; the
                # raw product u_term can have removable poles on the range
                for k in range(lo, hi + 1):
                    c = rf2_eval(dcoeff, n, k)
                    if c:
                        total -= c * self._g_value(n, k + 1)
        # boundary values of G * b
        for k0, sgn in ((hi + 1, 1), (lo, -1)):
            b = mpq(1)
            for atom in self.atoms:
                b *= harmonic_eval(atom, n, k0)
            if b:
                total += sgn * self._g_value(n, k0) * b
        return total

    def render(self) -> str:
        kind = "telescoped" if not self.reduced else "finite-sum"
        return f"-sum_k G(n,k+1)*Delta(b_k) + G*b boundary values ({kind})"


def abel_wz_pipeline(
    F: TermExpr,
    f: TermExpr,
    weight: WeightExpr,
    s0: Rat,
    support: Support,
    n0: int = 0,
) -> PipelineResult:
    """Derive S(n) = f(n) * (S(n0)/f(n0) + sum_{j<n} U(j)) for the weighted
    sum S(n) = sum_k F(n,k) b_k, via a WZ certificate for (F/f, G)."""
    from .zeilberger import wz_certify

    trace = ProofTrace()
    if len(weight.monomials) != 1 or weight.monomials[0][1] != QN_ONE_K():
        raise AbelError("abel_wz_pipeline expects a single monomial weight")
    atoms = weight.monomials[0][0]
    if len(atoms) != 1:
        raise AbelError(
            "abel_wz_pipeline handles degree-1 weights; strip higher degrees "
            "with abel_step first"
        )
    pair = wz_certify(F, f)
    if pair is None:
        raise GosperFailed("no WZ certificate for F/f")
    fhat = F.div(f)
    g_term = fhat.times_ratfunc(pair.g_over_f)
    trace.add(
        "gosper-certificate",
        f"WZ certificate G/(F/f) = {render_ratfunc(pair.g_over_f)}",
        {"certificate": pair.g_over_f},
        check=_make_wz_check(fhat, g_term, support),
    )
    dw = delta_weight(atoms)
    g_next = g_term.shift_k(1)
    pieces = []
    for atoms2, dcoeff in dw.monomials:
        assert not atoms2
        u_term = g_next.times_ratfunc(dcoeff).times_const(-1)
        anti = antidifference(u_term)
        pieces.append((dcoeff, u_term, anti))
    u = WZDifference(
        g_term=g_term,
        fhat=fhat,
        fhat_next=fhat.shift_n(1),
        atoms=atoms,
        pieces=pieces,
        support=support,
    )
    trace.add(
        "abel-step",
        "Abel's lemma applied to sum_k Delta(G) b_k "
        f"({sum(1 for p in pieces if p[2] is not None)}/{len(pieces)} "
        "piece(s) telescoped)",
        {"difference": u},
    )
    ident = WZIdentity(f=f, n0=n0, s0=mpq(s0), u=u)
    trace.add(
        "closed-form-assembly",
        ident.render(),
        {"closed_form": ident},
        check=_make_wz_identity_check(F, f, weight, support, ident),
    )
    return PipelineResult(ident, trace)


def _make_wz_check(fhat: TermExpr, g_term: TermExpr, support: Support):
    def check(n: int) -> bool:
        lo, hi = support.at(n)
        for k in range(lo, min(hi, lo + 5) + 1):
            try:
                lhs = fhat.shift_n(1).eval(n, k) - fhat.eval(n, k)
                rhs = g_term.eval(n, k + 1) - g_term.eval(n, k)
            except EvalDomainError:
                continue
            if lhs != rhs:
                return False
        return True

    return check


def _make_wz_identity_check(F, f, weight, support, ident):
    def check(n: int) -> bool:
        spec = SumSpec(F, weight, support)
        return spec.brute(n) == ident.ev(n)

    return check


def QN_ONE_K() -> RatFunc:
    from .terms import RF2_ONE

    return RF2_ONE
