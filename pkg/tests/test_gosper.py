"""Indefinite summation: canonical form, dispersion, certificates."""

import random

import pytest
from gmpy2 import mpq

from abelsum.dsl import parse_term
from abelsum.gosper import antidifference, canonicalize, dispersion_set, gosper
from abelsum.oracle import random_summable_ratio
from abelsum.poly import QQ, RatFunc, UniPoly
from abelsum.terms import EvalDomainError, rf2_eval


def ratio_of(src, params=None):
    return parse_term(src, params or {}).ratio_k()


def check_certificate(cert, rho, samples=24):
    """Defining property R(k+1) rho(k) - R(k) = 1 at pole-free points."""
    checked = 0
    for n in (4, 9):
        for k in range(-3, 10):
            try:
                lhs = rf2_eval(cert, n, k + 1) * rf2_eval(rho, n, k) - rf2_eval(
                    cert, n, k
                )
            except (ZeroDivisionError, EvalDomainError):
                continue
            assert lhs == 1, (n, k)
            checked += 1
    assert checked >= samples // 4


# -- canonical form ----------------------------------------------------------


def test_gosper_petkovsek_factorization():
    # r = k/(k+2): a/b shift-coprime, c carries the k+1 factor
    r = parse_term("rat(k/(k+2))").rational
    form = canonicalize(r)
    # reconstruct r = (a/b) * c(k+1)/c(k)
    for n in (3, 7):
        for k in range(1, 8):
            lhs = rf2_eval(r, n, k)
            rhs = (
                rf2_eval(RatFunc(form.a, form.b), n, k)
                * rf2_eval(RatFunc.from_poly(form.c.shift(1)), n, k)
                / rf2_eval(RatFunc.from_poly(form.c), n, k)
            )
            assert lhs == rhs


def test_dispersion_set():
    x = UniPoly.var(QQ)
    one = UniPoly.one(QQ)
    # a = k, b = k - 3: gcd(a(k), b(k+3)) = k nontrivial at shift 3
    from abelsum.terms import rf2_const
    from abelsum.poly import QN

    a = UniPoly(QN, (QN.of(0), QN.one))
    b = UniPoly(QN, (QN.of(-3), QN.one))
    assert 3 in dispersion_set(a, b)
    assert dispersion_set(a, a) == [0]


# -- certificates on known inputs --------------------------------------------


def test_partial_fraction_example():
    # sum 1/(k(k+1)) telescopes with antidifference -(1/k): R(k) = -(k+1)
    cert = gosper(ratio_of("rat(1/(k*(k+1)))"))
    expected = parse_term("rat(-k-1)").rational
    assert cert == expected


def test_double_binomial_summand_certificates():
    # the alternating double-binomial summand for each small p
    for p in range(4):
        rho = ratio_of("(-1)^(k-1) * C(n,k) * C(k,p)", {"p": mpq(p)})
        cert = gosper(rho)
        expected = parse_term("rat(-(k-p)/(n-p))", {"p": mpq(p)}).rational
        assert cert == expected, p


def test_not_summable_verdicts():
    # 1/k sums to H_n: famously no hypergeometric antidifference
    assert gosper(ratio_of("rat(1/k)")) is None
    # the same ratio given directly
    assert gosper(parse_term("rat(k/(k+1))").rational) is None
    # shifted harmonic-type terms 1/(k+x)
    assert gosper(ratio_of("rat(1/(2*k+1))")) is None
    # binomial row C(n,k) (partial sums of a row have no closed form)
    assert gosper(ratio_of("C(n,k)")) is None


def test_not_summable_verdict_is_shift_stable():
    base = parse_term("rat(1/k)")
    for d in range(0, 6):
        assert gosper(base.shift_k(d).ratio_k()) is None


def test_summable_verdicts_random():
    rng = random.Random(91)
    for _ in range(60):
        rho = random_summable_ratio(rng)
        cert = gosper(rho)
        assert cert is not None
        check_certificate(cert, rho)


def test_antidifference_telescopes():
    t = parse_term("rat(k) * fact(k)")  # Delta(k!) = k * k!
    a = antidifference(t)
    assert a is not None
    for n in (3, 6):
        for k in range(0, n):
            try:
                assert a.eval(n, k + 1) - a.eval(n, k) == t.eval(n, k)
            except EvalDomainError:
                continue


def test_antidifference_none_for_harmonic_type():
    assert antidifference(parse_term("rat(1/k)")) is None
