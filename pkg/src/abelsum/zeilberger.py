"""Creative telescoping and WZ-pair certification.

zeilberger() finds, for a term F(n, k) hypergeometric in both variables,
polynomials s_0(n)..s_J(n) and a certificate G = R(k) F(n, k) with

    sum_j s_j(n) F(n+j, k) = G(n, k+1) - G(n, k),

searching the order J upward.  wz_certify() specializes to the WZ setting
F(n+1,k) - F(n,k) = G(n,k+1) - G(n,k) for F normalized by a closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from gmpy2 import mpq

from .gosper import canonicalize, degree_bound, gosper
from .poly import QN, QQ, RatFunc, UniPoly, poly_gcd, poly_lcm, solve_linear
from .rationals import Rat
from .terms import TermExpr, rf2_shift_n


class ZeilbergerError(Exception):
    pass


@dataclass(frozen=True)
class Recurrence:
    """sum_j coeffs[j](n) S(n+j) = 0 with telescoping certificate G/F."""

    order: int
    coeffs: tuple        # UniPoly over QQ in n, sigma_0 .. sigma_J
    certificate: RatFunc  # G/F, rational in k over QQ(n)

    def coeff_at(self, j: int, nval) -> Rat:
        return self.coeffs[j].eval_at(mpq(nval))


@dataclass(frozen=True)
class WZPair:
    F: TermExpr
    f: TermExpr
    g_over_f: RatFunc  # G / (F/f), rational in k over QQ(n)


def _qn_const_to_k(c: RatFunc) -> RatFunc:
    """Lift a QQ(n) element to a constant rational function of k."""
    return RatFunc.const(QN, c)


def _shift_ratios(F: TermExpr, order: int) -> list[RatFunc]:
    """s_j(k) = F(n+j, k)/F(n, k) for j = 0..order."""
    rn = F.ratio_n()
    out = [RatFunc.from_poly(UniPoly.one(QN))]
    for j in range(order):
        out.append(out[-1] * rf2_shift_n(rn, j))
    return out


def zeilberger(F: TermExpr, max_order: int = 3) -> Recurrence | None:
    """Smallest-order telescoper with J <= max_order, or None."""
    r = F.ratio_k()
    for order in range(1, max_order + 1):
        rec = _zeilberger_at_order(F, r, order)
        if rec is not None:
            return rec
    return None


def _zeilberger_at_order(F: TermExpr, r: RatFunc, order: int) -> Recurrence | None:
    sj = _shift_ratios(F, order)
    # common denominator V of the shift ratios
    V = UniPoly.one(QN)
    for s in sj:
        V = poly_lcm(V, s.denom)
    uj = [s.numer * V.exact_div(s.denom) for s in sj]
    # combined term (sum_j sigma_j u_j) * h with h = F / V
    rho = r * RatFunc(V, V.shift(1))
    form = canonicalize(rho)
    a, b, c = form.a, form.b, form.c
    bm = b.shift(-1)
    kdeg = c.degree + max(u.degree for u in uj)
    db = degree_bound(a, bm, kdeg)
    if db is None:
        return None
    # unknowns: y_0..y_db, sigma_0..sigma_order; homogeneous system
    kvar = UniPoly.var(QN)
    kp1 = UniPoly(QN, (QN.one, QN.one))
    cols = []
    for i in range(db + 1):
        cols.append(a * (kp1 ** i) - bm * (kvar ** i))
    for j in range(order + 1):
        cols.append(-(c * uj[j]))
    maxdeg = max(col.degree for col in cols)
    rows = []
    for d in range(maxdeg + 1):
        rows.append([col.coeff(d) for col in cols])
    zero_rhs = [QN.zero] * len(rows)
    sol = solve_linear(rows, zero_rhs, QN)
    if sol is None:
        return None
    _, kernel = sol
    # prefer a genuine order-`order` solution (nonzero leading sigma); a
    # vanishing leading coefficient signals a lower-order telescoper hiding
    # in the kernel (e.g. a summand that is already Gosper-summable)
    vec = None
    for kv in kernel:
        if kv[db + 1 + order]:
            vec = kv
            break
    if vec is None:
        for kv in kernel:
            if any(kv[db + 1 + j] for j in range(order + 1)):
                vec = kv
                break
    if vec is None:
        return None
    y = UniPoly(QN, vec[: db + 1])
    sigma = vec[db + 1:]
    cert = RatFunc(bm * y, c * V)
    sigma_polys, mult = _normalize_sigma(sigma)
    cert = cert * _qn_const_to_k(mult)
    rec = Recurrence(order=order, coeffs=tuple(sigma_polys), certificate=cert)
    _verify_recurrence(rec, sj, r)
    return rec


def _normalize_sigma(sigma):
    """Clear denominators and content; returns (polys over QQ in n, factor)."""
    den = UniPoly.one(QQ)
    for s in sigma:
        den = poly_lcm(den, s.denom)
    polys = [s.numer * den.exact_div(s.denom) for s in sigma]
    content = UniPoly.zero(QQ)
    for p in polys:
        content = poly_gcd(content, p)
    if content.degree > 0:
        polys = [p.exact_div(content) for p in polys]
    # make coefficients integer and primitive, leading sigma positive
    denlcm = 1
    for p in polys:
        for co in p.coeffs:
            denlcm = denlcm * co.denominator // math.gcd(denlcm, int(co.denominator))
    polys = [p.scale(mpq(denlcm)) for p in polys]
    numgcd = 0
    for p in polys:
        for co in p.coeffs:
            numgcd = math.gcd(numgcd, int(co.numerator))
    if numgcd > 1:
        polys = [p.scale(mpq(1, numgcd)) for p in polys]
    lead = None
    for p in reversed(polys):
        if not p.is_zero():
            lead = p
            break
    if lead is not None and lead.lc < 0:
        polys = [-p for p in polys]
    # total factor applied relative to the raw sigma
    raw = sigma
    factor = None
    for p, s in zip(polys, raw):
        if not s.is_zero():
            factor = RatFunc.from_poly(p) / s
            break
    return polys, factor


def _verify_recurrence(rec: Recurrence, sj, r: RatFunc):
    lhs = RatFunc.from_poly(UniPoly.zero(QN))
    for j, s in enumerate(sj):
        cj = RatFunc.from_poly(rec.coeffs[j])
        lhs = lhs + s * _qn_const_to_k(cj)
    rhs = rec.certificate.shift(1) * r - rec.certificate
    if lhs != rhs:
        raise ZeilbergerError("internal error: telescoper failed verification")


def wz_certify(F: TermExpr, f: TermExpr) -> WZPair | None:
    """Certificate ratio for the WZ pair (F/f, G), or None.

    With Fh = F/f, finds rational R(k) such that G = R * Fh satisfies
    Fh(n+1, k) - Fh(n, k) = G(n, k+1) - G(n, k).
    """
    Fh = F.div(f)
    w = Fh.ratio_n()
    one = RatFunc.from_poly(UniPoly.one(QN))
    wm1 = w - one
    if wm1.is_zero():
        return WZPair(F, f, RatFunc.from_poly(UniPoly.zero(QN)))
    rk = Fh.ratio_k()
    rho = (wm1.shift(1) / wm1) * rk
    ru = gosper(rho)
    if ru is None:
        return None
    cert = ru * wm1
    # WZ equation, divided through by Fh(n, k)
    if cert.shift(1) * rk - cert != wm1:
        raise ZeilbergerError("internal error: WZ certificate failed verification")
    return WZPair(F, f, cert)


def solve_recurrence_first_order(
    rec: Recurrence, initial_n: int, initial_value: Rat, target_n: int
) -> Rat:
    """Iterate an order-1 recurrence sigma_1(n) S(n+1) + sigma_0(n) S(n) = 0
    exactly from S(initial_n) to S(target_n)."""
    if rec.order != 1:
        raise ZeilbergerError("recurrence is not first order")
    s0, s1 = rec.coeffs
    val = mpq(initial_value)
    if target_n >= initial_n:
        for n in range(initial_n, target_n):
            d = s1.eval_at(mpq(n))
            if not d:
                raise ZeilbergerError(f"leading coefficient vanishes at n={n}")
            val = -s0.eval_at(mpq(n)) / d * val
    else:
        for n in range(initial_n - 1, target_n - 1, -1):
            d = s0.eval_at(mpq(n))
            if not d:
                raise ZeilbergerError(f"trailing coefficient vanishes at n={n}")
            val = -s1.eval_at(mpq(n)) / d * val
    return val
