"""Exact arithmetic layer: polynomials, gcd, roots, rational functions."""

import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from abelsum.poly import (
    QN,
    QQ,
    FractionField,
    PolynomialError,
    RatFunc,
    UniPoly,
    integer_roots,
    poly_gcd,
    poly_lcm,
    resultant,
)

rationals = st.builds(
    mpq,
    st.integers(min_value=-50, max_value=50),
    st.integers(min_value=1, max_value=12),
)
qq_polys = st.lists(rationals, min_size=0, max_size=6).map(
    lambda cs: UniPoly(QQ, tuple(cs))
)
nonzero_qq_polys = qq_polys.filter(lambda p: not p.is_zero())


def poly_of_ints(*coeffs):
    return UniPoly(QQ, tuple(mpq(c) for c in coeffs))


# -- ring axioms and division -----------------------------------------------


@given(qq_polys, qq_polys, qq_polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert a + UniPoly.zero(QQ) == a
    assert a * UniPoly.one(QQ) == a


@given(qq_polys, nonzero_qq_polys)
def test_divmod_identity(a, b):
    q, r = a.divmod(b)
    assert a == q * b + r
    assert r.is_zero() or r.degree < b.degree


def test_divmod_by_zero():
    with pytest.raises(PolynomialError):
        poly_of_ints(1, 2).divmod(UniPoly.zero(QQ))


@given(qq_polys)
def test_eval_matches_horner(p):
    x = mpq(7, 3)
    expected = sum((c * x**i for i, c in enumerate(p.coeffs)), mpq(0))
    assert p.eval_at(x) == expected


@given(qq_polys, st.integers(min_value=-4, max_value=4))
def test_shift_is_composition(p, j):
    x = mpq(5, 2)
    assert p.shift(j).eval_at(x) == p.eval_at(x + j)


# -- gcd / lcm ---------------------------------------------------------------


@given(nonzero_qq_polys, nonzero_qq_polys, nonzero_qq_polys)
@settings(max_examples=60)
def test_gcd_divides_and_sees_common_factor(a, b, c):
    g = poly_gcd(a * c, b * c)
    assert (a * c) % g == UniPoly.zero(QQ)
    assert (b * c) % g == UniPoly.zero(QQ)
    # the planted common factor must divide the gcd
    assert g % c.monic() == UniPoly.zero(QQ)
    assert g.lc == QQ.of(1)


def test_gcd_of_zero():
    z = UniPoly.zero(QQ)
    p = poly_of_ints(2, 4)
    assert poly_gcd(z, z) == z
    assert poly_gcd(p, z) == p.monic()


@given(nonzero_qq_polys, nonzero_qq_polys)
@settings(max_examples=40)
def test_lcm_product_relation(a, b):
    g = poly_gcd(a, b)
    l = poly_lcm(a, b)
    assert (a * b).monic() == (g * l).monic()


def test_gcd_over_fraction_field_matches_naive_euclid():
    field = FractionField(QQ, "n")

    def naive(p, q):
        while not q.is_zero():
            p, q = q, p % q
        return p.monic()

    rng = random.Random(11)

    def rand_poly(deg, cdeg):
        def coeff():
            num = UniPoly(QQ, tuple(mpq(rng.randint(-4, 4)) for _ in range(cdeg + 1)))
            return RatFunc.from_poly(num)

        return UniPoly(field, tuple(coeff() for _ in range(deg + 1)))

    for _ in range(40):
        a = rand_poly(rng.randint(1, 4), rng.randint(0, 2))
        b = rand_poly(rng.randint(1, 4), rng.randint(0, 2))
        if rng.random() < 0.5:
            common = rand_poly(rng.randint(1, 2), 1)
            a, b = a * common, b * common
        if a.is_zero() or b.is_zero():
            continue
        assert poly_gcd(a, b) == naive(a, b)


# -- resultant ---------------------------------------------------------------


def test_resultant_detects_common_root():
    # (x - 2)(x - 5) and (x - 2)(x + 1) share the root 2
    p = poly_of_ints(10, -7, 1)
    q = poly_of_ints(-2, -1, 1)
    assert resultant(p, q) == QQ.of(0)
    # coprime pair: nonzero
    r = poly_of_ints(1, 1)
    assert resultant(p, r) != QQ.of(0)


# -- integer roots -----------------------------------------------------------


def test_integer_roots_known():
    # x(x - 7)(x + 3) with a rational scale
    p = poly_of_ints(0, -21, -4, 1).scale(mpq(2, 9))
    assert integer_roots(p) == {0, 7, -3}


def test_integer_roots_rejects_zero():
    with pytest.raises(PolynomialError):
        integer_roots(UniPoly.zero(QQ))


def test_integer_roots_none():
    assert integer_roots(poly_of_ints(1, 0, 1)) == set()
    assert integer_roots(poly_of_ints(7)) == set()


def test_integer_roots_random_planted():
    rng = random.Random(3)
    for _ in range(60):
        roots = sorted({rng.randint(-40, 40) for _ in range(rng.randint(0, 4))})
        p = UniPoly.one(QQ)
        for r in roots:
            p = p * poly_of_ints(-r, 1)
        # a rootless quadratic cofactor
        p = p * poly_of_ints(rng.randint(1, 9), rng.randint(-3, 3), rng.randint(1, 6))
        got = integer_roots(p)
        assert set(roots) <= got
        for r in got:
            assert not p.eval_at(mpq(r))


def test_integer_roots_huge_coefficients():
    # coefficients far beyond trial-division range must not stall
    rng = random.Random(5)
    for _ in range(10):
        roots = {rng.randint(-10**6, 10**6) for _ in range(2)}
        p = UniPoly.one(QQ).scale(mpq(rng.randint(1, 10**25)))
        for r in roots:
            p = p * poly_of_ints(-r, 1)
        p = p * poly_of_ints(rng.randint(1, 10**40), rng.randint(-(10**42), 10**42),
                             rng.randint(1, 10**40))
        got = integer_roots(p)
        assert roots <= got
        for r in got:
            assert not p.eval_at(mpq(r))


# -- rational functions ------------------------------------------------------


def test_ratfunc_canonical_structural_equality():
    x = UniPoly.var(QQ)
    one = UniPoly.one(QQ)
    a = RatFunc(x * x - one, x - one)       # (x^2-1)/(x-1) -> x+1
    b = RatFunc(x + one, one)
    assert a == b
    assert a.numer == b.numer and a.denom == b.denom
    assert hash(a) == hash(b)


def test_ratfunc_monic_denominator():
    x = UniPoly.var(QQ)
    r = RatFunc(UniPoly.one(QQ), x.scale(mpq(3)))
    assert r.denom.lc == QQ.of(1)
    assert r.eval_at(mpq(2)) == mpq(1, 6)


def test_ratfunc_zero_denominator_rejected():
    with pytest.raises(ZeroDivisionError):
        RatFunc(UniPoly.one(QQ), UniPoly.zero(QQ))


@given(rationals, rationals)
def test_ratfunc_field_ops(u, v):
    x = UniPoly.var(QQ)
    one = UniPoly.one(QQ)
    a = RatFunc(x + UniPoly.const(QQ, u), x * x + one)
    b = RatFunc(x - UniPoly.const(QQ, v), x + one)
    pt = mpq(3, 2)
    assert (a + b).eval_at(pt) == a.eval_at(pt) + b.eval_at(pt)
    assert (a * b).eval_at(pt) == a.eval_at(pt) * b.eval_at(pt)
    assert (a - b).eval_at(pt) == a.eval_at(pt) - b.eval_at(pt)
    if not b.is_zero() and b.eval_at(pt):
        assert (a / b).eval_at(pt) == a.eval_at(pt) / b.eval_at(pt)


def test_nested_fraction_field():
    # QQ(n)[k] arithmetic: (k + n) * (k - n) = k^2 - n^2
    n = RatFunc.var(QQ)
    k = UniPoly.var(QN)
    p = (k + UniPoly.const(QN, n)) * (k - UniPoly.const(QN, n))
    assert p.coeff(1).is_zero()
    assert p.coeff(0) == -(n * n)
    assert p.coeff(2) == QN.one
