"""Indefinite hypergeometric summation (Gosper's algorithm).

Given the consecutive-term ratio r(k) = t(k+1)/t(k) of a hypergeometric
term, decide whether an antidifference a(k) = R(k) t(k) with
a(k+1) - a(k) = t(k) exists, and produce the certificate R(k).  The
certificate always satisfies R(k+1) r(k) - R(k) = 1 as a rational-function
identity and is re-verified before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .poly import (
    QN,
    QQ,
    FractionField,
    PolynomialError,
    RatFunc,
    UniPoly,
    integer_roots,
    lagrange_interpolate,
    poly_gcd,
    solve_linear,
)
from .terms import TermExpr


class GosperError(Exception):
    pass


@dataclass(frozen=True)
class GosperForm:
    """Shift-coprime split r(k) = (a(k)/b(k)) * (c(k+1)/c(k))."""

    a: UniPoly
    b: UniPoly
    c: UniPoly

    def reconstruct(self) -> RatFunc:
        num = self.a * self.c.shift(1)
        den = self.b * self.c
        return RatFunc(num, den)


def _specialize_to_qq(p: UniPoly, nval) -> UniPoly:
    """Evaluate QQ(n) coefficients at a concrete n, giving a poly over QQ."""
    return UniPoly(QQ, tuple(c.eval_at(mpq(nval)) for c in p.coeffs))


def _resultant_in_shift(a: UniPoly, b: UniPoly) -> UniPoly:
    """Res_k(a(k), b(k+j)) as a polynomial in j over QQ, for a, b over QQ."""
    from .poly import resultant

    deg_bound = a.degree * b.degree
    points = []
    for j in range(deg_bound + 1):
        points.append((mpq(j), resultant(a, b.shift(j))))
    return lagrange_interpolate(points, QQ)


def dispersion_set(a: UniPoly, b: UniPoly) -> list[int]:
    """Nonnegative integer shifts h with gcd(a(k), b(k+h)) nontrivial."""
    if a.degree <= 0 or b.degree <= 0:
        return []
    field = a.field
    if field is QQ:
        candidates = _dispersion_candidates_qq(a, b)
    else:
        candidates = None
        for nval in (17, 101, 1009, 37, 57):
            try:
                a0 = _specialize_to_qq(a, nval)
                b0 = _specialize_to_qq(b, nval)
            except ZeroDivisionError:
                continue
            if a0.degree == a.degree and b0.degree == b.degree:
                candidates = _dispersion_candidates_qq(a0, b0)
                break
        if candidates is None:
            raise GosperError("could not specialize for dispersion computation")
    out = []
    for j in sorted(candidates):
        if j < 0:
            continue
        if poly_gcd(a, b.shift(j)).degree > 0:
            out.append(j)
    return out


def _dispersion_candidates_qq(a: UniPoly, b: UniPoly) -> set[int]:
    r = _resultant_in_shift(a, b)
    if r.is_zero():
        raise GosperError("degenerate dispersion resultant")
    if r.degree == 0:
        return set()
    return integer_roots(r)


def canonicalize(r: RatFunc) -> GosperForm:
    """Gosper-Petkovsek normal form of a nonzero ratio."""
    if r.is_zero():
        raise GosperError("zero ratio has no normal form")
    field = r.field
    num, den = r.numer, r.denom  # already coprime, den monic
    z = num.lc if num.degree >= 0 else field.one
    a = num.monic()
    b = den
    c = UniPoly.one(num.field)
    for j in dispersion_set(a, b):
        g = poly_gcd(a, b.shift(j))
        if g.degree <= 0:
            continue
        a = a.exact_div(g)
        b = b.exact_div(g.shift(-j))
        for i in range(1, j + 1):
            c = c * g.shift(-i)
    a = a.scale(z)
    return GosperForm(a, b, c)


def _as_nonneg_int(v, field) -> int | None:
    """Interpret a field element as a nonnegative integer, if it is one."""
    if isinstance(v, RatFunc):
        if not v.is_const():
            return None
        v = v.as_const()
    if v < 0 or v.denominator != 1:
        return None
    return int(v.numerator)


def degree_bound(a: UniPoly, bm: UniPoly, kdeg: int) -> int | None:
    """Upper bound for deg y in a(k) y(k+1) - b(k-1) y(k) = rhs with
    deg rhs <= kdeg; None when no nonnegative bound exists."""
    field = a.field
    n, m = a.degree, bm.degree
    cands = []
    if n != m or a.lc != bm.lc:
        cands.append(kdeg - max(n, m))
    else:
        cands.append(kdeg - n + 1)
        if n > 0:
            delta = (bm.coeff(n - 1) - a.coeff(n - 1)) / a.lc
            di = _as_nonneg_int(delta, field)
            if di is not None:
                cands.append(di)
        else:
            cands.append(0)
    best = None
    for c in cands:
        if isinstance(c, int) and c >= 0:
            best = c if best is None else max(best, c)
    return best


def solve_key_equation(a: UniPoly, bm: UniPoly, rhs: UniPoly, dbound: int):
    """Polynomial y with a(k) y(k+1) - b(k-1) y(k) = rhs(k), deg y <= dbound.

    Returns the particular solution with all free (kernel) coefficients set
    to zero, or None.
    """
    field = a.field
    # basis contributions: P_i = a * (k+1)^i - bm * k^i
    kp1 = UniPoly(a.field, (field.one, field.one))
    cols = []
    maxdeg = rhs.degree
    for i in range(dbound + 1):
        p = a * (kp1 ** i) - bm * (UniPoly.var(a.field) ** i)
        cols.append(p)
        maxdeg = max(maxdeg, p.degree)
    rows = []
    vec = []
    for d in range(maxdeg + 1):
        rows.append([col.coeff(d) for col in cols])
        vec.append(rhs.coeff(d))
    sol = solve_linear(rows, vec, field)
    if sol is None:
        return None
    particular, _kernel = sol
    return UniPoly(a.field, particular)


def gosper(r: RatFunc) -> RatFunc | None:
    """Certificate R(k) with R(k+1) r(k) - R(k) = 1, or None (not summable)."""
    if r.is_zero():
        raise GosperError("zero ratio")
    form = canonicalize(r)
    a, b, c = form.a, form.b, form.c
    bm = b.shift(-1)
    d = degree_bound(a, bm, c.degree)
    if d is None:
        return None
    y = solve_key_equation(a, bm, c, d)
    if y is None:
        return None
    cert = RatFunc(bm * y, c)
    one = RatFunc.from_poly(UniPoly.one(a.field))
    if cert.shift(1) * r - cert != one:
        raise GosperError("internal error: certificate failed verification")
    return cert


def antidifference(t: TermExpr) -> TermExpr | None:
    """Term a with a(n, k+1) - a(n, k) = t(n, k), as R(k) * t, or None."""
    cert = gosper(t.ratio_k())
    if cert is None:
        return None
    return t.times_ratfunc(cert)
