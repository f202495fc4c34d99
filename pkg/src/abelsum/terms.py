"""Hypergeometric terms in (n, k) and their shift ratios.

A term is a product of a sign factor (-1)^L, constant-base powers c^L,
binomials, factorials, Pochhammer symbols (all with integer linear-form
arguments) and a rational function of (n, k).  The shift ratios
t(n, k+1)/t(n, k) and t(n+1, k)/t(n, k) are rational functions of k over
QQ(n); they drive Gosper's and Zeilberger's algorithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from gmpy2 import mpq

from .rationals import Rat, as_int, is_integral
from .poly import QN, QQ, RatFunc, UniPoly


class TermError(Exception):
    pass


class EvalDomainError(TermError):
    """Evaluation left the domain (negative factorial, pole, ...)."""


@dataclass(frozen=True)
class LinearForm:
    """Integer-linear form a*n + b*k + c with rational constant c."""

    n: int = 0
    k: int = 0
    c: Rat = mpq(0)

    def __post_init__(self):
        object.__setattr__(self, "c", mpq(self.c))

    def __call__(self, n, k=0):
        return self.n * n + self.k * k + self.c

    def eval_int(self, n, k=0) -> int:
        return as_int(self(n, k))

    def is_integer_valued(self) -> bool:
        return is_integral(self.c)

    def __add__(self, other):
        return LinearForm(self.n + other.n, self.k + other.k, self.c + other.c)

    def __sub__(self, other):
        return LinearForm(self.n - other.n, self.k - other.k, self.c - other.c)

    def __neg__(self):
        return LinearForm(-self.n, -self.k, -self.c)

    def add_const(self, d):
        return LinearForm(self.n, self.k, self.c + mpq(d))

    def shift_k(self, d: int):
        """L at (n, k+d)."""
        return LinearForm(self.n, self.k, self.c + self.k * d)

    def shift_n(self, d: int):
        return LinearForm(self.n, self.k, self.c + self.n * d)

    def as_poly_k(self) -> UniPoly:
        """The form as a polynomial in k over QQ(n)."""
        c0 = RatFunc.from_poly(UniPoly(QQ, (self.c, mpq(self.n))))
        return UniPoly(QN, (c0, QN.of(self.k)))

    def render(self) -> str:
        parts = []
        for coef, name in ((self.n, "n"), (self.k, "k")):
            if coef == 1:
                parts.append(f"+{name}")
            elif coef == -1:
                parts.append(f"-{name}")
            elif coef:
                parts.append(f"+{coef}*{name}" if coef > 0 else f"{coef}*{name}")
        if self.c or not parts:
            parts.append(f"+{self.c}" if self.c >= 0 else f"{self.c}")
        s = "".join(parts)
        return s[1:] if s.startswith("+") else s


LF_ZERO = LinearForm()
LF_N = LinearForm(n=1)
LF_K = LinearForm(k=1)

RF_ONE_K = QN.one  # cached one of QQ(n) used as the k-rational unit below

# rational-in-k-over-QQ(n) constants
K_FIELD = QN


def rf2_const(v) -> RatFunc:
    """Constant rational function of k over QQ(n)."""
    return RatFunc.const(QN, QN.of(v))


RF2_ONE = rf2_const(1)
RF2_ZERO = RatFunc.from_poly(UniPoly.zero(QN))


def rf2_eval(r: RatFunc, nval: int, kval: int) -> Rat:
    """Evaluate a rational function of k over QQ(n) at integers (n, k)."""
    nq = mpq(nval)
    kq = mpq(kval)

    def ev_poly(p: UniPoly) -> Rat:
        acc = mpq(0)
        for c in reversed(p.coeffs):
            acc = acc * kq + c.eval_at(nq)
        return acc

    den = ev_poly(r.denom)
    if not den:
        raise EvalDomainError(f"pole of rational factor at (n, k)=({nval}, {kval})")
    return ev_poly(r.numer) / den


def rf2_shift_k(r: RatFunc, d: int) -> RatFunc:
    return r.shift(d)


def rf2_shift_n(r: RatFunc, d: int) -> RatFunc:
    def sh(p: UniPoly) -> UniPoly:
        return UniPoly(QN, tuple(c.shift(d) for c in p.coeffs))

    return RatFunc(sh(r.numer), sh(r.denom))


def _rising_ratio(form: LinearForm, d: int) -> RatFunc:
    """fact(L + d)/fact(L) as a rational function of k over QQ(n)."""
    if d == 0:
        return RF2_ONE
    p = form.as_poly_k()
    acc = UniPoly.one(QN)
    if d > 0:
        for i in range(1, d + 1):
            acc = acc * (p + UniPoly.const(QN, i))
        return RatFunc.from_poly(acc)
    for i in range(0, -d):
        acc = acc * (p + UniPoly.const(QN, -i))
    return RatFunc(UniPoly.one(QN), acc)


@dataclass(frozen=True)
class TermExpr:
    """Product-form hypergeometric term in (n, k)."""

    sign: LinearForm = LF_ZERO
    powers: tuple = ()        # (base: Rat, exponent: LinearForm)
    binomials: tuple = ()     # (top: LinearForm, bottom: LinearForm, power: int)
    factorials: tuple = ()    # (arg: LinearForm, power: int)
    pochhammers: tuple = ()   # (base: Rat, length: LinearForm, power: int)
    rational: RatFunc = dc_field(default_factory=lambda: RF2_ONE)

    def __post_init__(self):
        if not self.sign.is_integer_valued():
            raise TermError("sign exponent must be integer-valued")
        for _, e in self.powers:
            if not e.is_integer_valued():
                raise TermError("power exponent must be integer-valued")
        for top, bot, _ in self.binomials:
            if not (top.is_integer_valued() and bot.is_integer_valued()):
                raise TermError("binomial arguments must be integer-valued")
        for arg, _ in self.factorials:
            if not arg.is_integer_valued():
                raise TermError("factorial argument must be integer-valued")
        for _, ln, _ in self.pochhammers:
            if not ln.is_integer_valued():
                raise TermError("Pochhammer length must be integer-valued")

    # -- evaluation ---------------------------------------------------

    def eval(self, n: int, k: int) -> Rat:
        """Exact value at integers (n, k).

        Conventions: C(a, b) = 0 for b < 0 or b > a when a >= 0; a < 0 is
        rejected.  Factorials of negative integers and Pochhammer symbols
        of negative length are domain errors.
        """
        acc = mpq(1) if self.sign.eval_int(n, k) % 2 == 0 else mpq(-1)
        for base, e in self.powers:
            ev = e.eval_int(n, k)
            if not base and ev < 0:
                raise EvalDomainError(f"0^{ev} at (n, k)=({n}, {k})")
            acc *= mpq(base) ** ev
        for top, bot, p in self.binomials:
            a = top.eval_int(n, k)
            b = bot.eval_int(n, k)
            if a < 0:
                raise EvalDomainError(
                    f"binomial with negative top {a} at (n, k)=({n}, {k})"
                )
            v = math.comb(a, b) if 0 <= b <= a else 0
            if not v and p < 0:
                raise EvalDomainError(
                    f"zero binomial in denominator at (n, k)=({n}, {k})"
                )
            if v != 1:
                acc *= mpq(v) ** p
        for arg, p in self.factorials:
            a = arg.eval_int(n, k)
            if a < 0:
                raise EvalDomainError(
                    f"factorial of negative integer {a} at (n, k)=({n}, {k})"
                )
            acc *= mpq(math.factorial(a)) ** p
        for base, ln, p in self.pochhammers:
            m = ln.eval_int(n, k)
            if m < 0:
                raise EvalDomainError(
                    f"Pochhammer of negative length {m} at (n, k)=({n}, {k})"
                )
            v = mpq(1)
            b = mpq(base)
            for i in range(m):
                v *= b + i
            if not v and p < 0:
                raise EvalDomainError(
                    f"zero Pochhammer in denominator at (n, k)=({n}, {k})"
                )
            acc *= v ** p
        if acc:
            acc *= rf2_eval(self.rational, n, k)
        else:
            # still surface poles of the rational factor at this point
            rf2_eval(self.rational, n, k)
        return acc

    # -- shift ratios -------------------------------------------------

    def _ratio(self, dn: int, dk: int) -> RatFunc:
        sgn = self.sign.n * dn + self.sign.k * dk
        const = mpq(-1) if sgn % 2 else mpq(1)
        for base, e in self.powers:
            d = e.n * dn + e.k * dk
            const *= mpq(base) ** d
        acc = rf2_const(const)
        for top, bot, p in self.binomials:
            dt = top.n * dn + top.k * dk
            db = bot.n * dn + bot.k * dk
            r = (
                _rising_ratio(top, dt)
                / _rising_ratio(bot, db)
                / _rising_ratio(top - bot, dt - db)
            )
            acc = acc * r ** p
        for arg, p in self.factorials:
            d = arg.n * dn + arg.k * dk
            acc = acc * _rising_ratio(arg, d) ** p
        for base, ln, p in self.pochhammers:
            d = ln.n * dn + ln.k * dk
            # (base)_{L+d} / (base)_L = prod_{i=0}^{d-1} (base + L + i)
            form = ln.add_const(mpq(base))
            if d >= 0:
                prod = UniPoly.one(QN)
                pk = form.as_poly_k()
                for i in range(d):
                    prod = prod * (pk + UniPoly.const(QN, i))
                r = RatFunc.from_poly(prod)
            else:
                prod = UniPoly.one(QN)
                pk = form.as_poly_k()
                for i in range(1, -d + 1):
                    prod = prod * (pk - UniPoly.const(QN, i))
                r = RatFunc(UniPoly.one(QN), prod)
            acc = acc * r ** p
        if dk:
            acc = acc * rf2_shift_k(self.rational, dk) / self.rational
        if dn:
            acc = acc * rf2_shift_n(self.rational, dn) / self.rational
        return acc

    def ratio_k(self) -> RatFunc:
        """t(n, k+1)/t(n, k) as a rational function of k over QQ(n)."""
        return self._ratio(0, 1)

    def ratio_n(self) -> RatFunc:
        """t(n+1, k)/t(n, k) as a rational function of k over QQ(n)."""
        return self._ratio(1, 0)

    # -- structural operations ---------------------------------------

    def shift_k(self, d: int) -> "TermExpr":
        return TermExpr(
            sign=self.sign.shift_k(d),
            powers=tuple((b, e.shift_k(d)) for b, e in self.powers),
            binomials=tuple(
                (t.shift_k(d), b.shift_k(d), p) for t, b, p in self.binomials
            ),
            factorials=tuple((a.shift_k(d), p) for a, p in self.factorials),
            pochhammers=tuple(
                (b, ln.shift_k(d), p) for b, ln, p in self.pochhammers
            ),
            rational=rf2_shift_k(self.rational, d),
        )

    def shift_n(self, d: int) -> "TermExpr":
        return TermExpr(
            sign=self.sign.shift_n(d),
            powers=tuple((b, e.shift_n(d)) for b, e in self.powers),
            binomials=tuple(
                (t.shift_n(d), b.shift_n(d), p) for t, b, p in self.binomials
            ),
            factorials=tuple((a.shift_n(d), p) for a, p in self.factorials),
            pochhammers=tuple(
                (b, ln.shift_n(d), p) for b, ln, p in self.pochhammers
            ),
            rational=rf2_shift_n(self.rational, d),
        )

    def times_ratfunc(self, r: RatFunc) -> "TermExpr":
        return TermExpr(
            sign=self.sign,
            powers=self.powers,
            binomials=self.binomials,
            factorials=self.factorials,
            pochhammers=self.pochhammers,
            rational=self.rational * r,
        )

    def times_const(self, c) -> "TermExpr":
        return self.times_ratfunc(rf2_const(mpq(c)))

    def mul(self, other: "TermExpr") -> "TermExpr":
        return TermExpr(
            sign=self.sign + other.sign,
            powers=self.powers + other.powers,
            binomials=self.binomials + other.binomials,
            factorials=self.factorials + other.factorials,
            pochhammers=self.pochhammers + other.pochhammers,
            rational=self.rational * other.rational,
        )

    def div(self, other: "TermExpr") -> "TermExpr":
        inv = TermExpr(
            sign=-other.sign,
            powers=tuple((b, -e) for b, e in other.powers),
            binomials=tuple((t, bo, -p) for t, bo, p in other.binomials),
            factorials=tuple((a, -p) for a, p in other.factorials),
            pochhammers=tuple((b, ln, -p) for b, ln, p in other.pochhammers),
            rational=other.rational.inverse(),
        )
        return self.mul(inv)

    # -- support ------------------------------------------------------

    def natural_support(self, n: int):
        """Smallest k-interval outside which the term vanishes, or None
        when no binomial factor bounds the support on both sides."""
        lowers, uppers = [], []
        for top, bot, p in self.binomials:
            if p <= 0:
                continue
            # nonzero requires 0 <= B(n,k) and B(n,k) <= T(n,k)
            for alpha, beta in (
                (bot.k, bot.n * n + bot.c),
                (top.k - bot.k, (top.n - bot.n) * n + top.c - bot.c),
            ):
                if alpha > 0:
                    lowers.append(-mpq(beta, alpha))
                elif alpha < 0:
                    uppers.append(-mpq(beta, alpha))
                elif beta < 0:
                    return (0, -1)  # identically zero
        if not lowers or not uppers:
            return None
        lo = max(lowers)
        hi = min(uppers)
        lo_i = int(math.ceil(lo)) if lo.denominator != 1 else int(lo)
        hi_i = int(math.floor(hi)) if hi.denominator != 1 else int(hi)
        return (lo_i, hi_i)

    def is_one(self) -> bool:
        return (
            not self.powers
            and not self.binomials
            and not self.factorials
            and not self.pochhammers
            and self.sign == LF_ZERO
            and self.rational == RF2_ONE
        )


TERM_ONE = TermExpr()


@dataclass(frozen=True)
class Support:
    """Explicit summation bounds as integer linear forms in n."""

    lower: LinearForm
    upper: LinearForm

    def __post_init__(self):
        if self.lower.k or self.upper.k:
            raise TermError("summation bounds may not depend on k")
        if not (self.lower.is_integer_valued() and self.upper.is_integer_valued()):
            raise TermError("summation bounds must be integer-valued")

    def at(self, n: int):
        return self.lower.eval_int(n), self.upper.eval_int(n)


def binom(top: LinearForm, bot: LinearForm, power: int = 1) -> TermExpr:
    return TermExpr(binomials=((top, bot, power),))


def sign_pow(e: LinearForm) -> TermExpr:
    return TermExpr(sign=e)
