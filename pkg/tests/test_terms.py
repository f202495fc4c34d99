"""Hypergeometric term layer: evaluation, shift ratios, domain errors."""

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from abelsum.dsl import parse_term
from abelsum.terms import EvalDomainError, LinearForm, Support, TermError, rf2_eval

TERM_SOURCES = [
    "C(n,k)",
    "(-1)^(k-1) * C(n,k) * C(k,p)",
    "C(n,k)^3",
    "(-1)^(n-k) * C(n,k) * C(n+k,k)",
    "fact(k) * rat(1/(k+1))",
    "poch(1/2, k) * rat(2)",
    "2^(k) * C(2*n,k)",
    "(-1)^(k) * C(2*n,k)^2",
]


def sample_term(src, params=None):
    return parse_term(src, params or {"p": mpq(2)})


# -- evaluation conventions --------------------------------------------------


def test_binomial_outside_range_is_zero():
    t = sample_term("C(n,k)")
    assert t.eval(4, -1) == 0
    assert t.eval(4, 5) == 0
    assert t.eval(4, 2) == 6


def test_negative_binomial_top_rejected():
    t = sample_term("C(n,k)")
    with pytest.raises(EvalDomainError):
        t.eval(-1, 0)


def test_negative_factorial_rejected():
    t = sample_term("fact(k)")
    with pytest.raises(EvalDomainError):
        t.eval(0, -2)


def test_rational_pole_surfaces_even_when_product_vanishes():
    # C(n,k) is 0 at k = -1, but the rational factor has a pole there
    t = sample_term("C(n,k) * rat(1/(k+1))")
    with pytest.raises(EvalDomainError):
        t.eval(3, -1)


def test_pochhammer_values():
    t = sample_term("poch(1/2, k)")
    # (1/2)_3 = (1/2)(3/2)(5/2)
    assert t.eval(0, 3) == mpq(15, 8)
    assert t.eval(0, 0) == 1


def test_sign_factor():
    t = sample_term("(-1)^(k-1) * C(n,k)")
    assert t.eval(5, 2) == -10
    assert t.eval(5, 3) == 10


# -- shift ratios ------------------------------------------------------------


@pytest.mark.parametrize("src", TERM_SOURCES)
def test_ratio_k_matches_value_quotient(src):
    t = sample_term(src)
    r = t.ratio_k()
    for n in (3, 5, 8):
        for k in range(0, n):
            try:
                lo, hi = t.eval(n, k), t.eval(n, k + 1)
                rv = rf2_eval(r, n, k)
            except (EvalDomainError, ZeroDivisionError):
                continue
            if lo:
                assert hi == rv * lo, (src, n, k)


@pytest.mark.parametrize("src", TERM_SOURCES)
def test_ratio_n_matches_value_quotient(src):
    t = sample_term(src)
    r = t.ratio_n()
    for n in (3, 5, 8):
        for k in range(0, n):
            try:
                lo, hi = t.eval(n, k), t.eval(n + 1, k)
                rv = rf2_eval(r, n, k)
            except (EvalDomainError, ZeroDivisionError):
                continue
            if lo:
                assert hi == rv * lo, (src, n, k)


@pytest.mark.parametrize("src", TERM_SOURCES)
@pytest.mark.parametrize("d", [-2, -1, 1, 3])
def test_shift_k_agrees_with_reindexed_eval(src, d):
    t = sample_term(src)
    s = t.shift_k(d)
    for n in (4, 7):
        for k in range(0, n):
            try:
                expected = t.eval(n, k + d)
            except EvalDomainError:
                with pytest.raises(EvalDomainError):
                    s.eval(n, k)
                continue
            assert s.eval(n, k) == expected


def test_shift_n_agrees_with_reindexed_eval():
    t = sample_term("(-1)^(n-k) * C(n,k) * C(n+k,k)")
    s = t.shift_n(2)
    for n in (2, 5):
        for k in range(0, n + 1):
            assert s.eval(n, k) == t.eval(n + 2, k)


def test_times_ratfunc_and_div():
    t = sample_term("C(n,k)")
    f = sample_term("fact(k)")
    q = t.mul(f).div(f)
    for n in (3, 6):
        for k in range(0, n + 1):
            assert q.eval(n, k) == t.eval(n, k)


# -- linear forms ------------------------------------------------------------


@given(
    st.integers(min_value=-5, max_value=5),
    st.integers(min_value=-5, max_value=5),
    st.integers(min_value=-20, max_value=20),
)
def test_linear_form_eval_and_shift(a, b, c):
    form = LinearForm(n=a, k=b, c=mpq(c))
    assert form.eval_int(3, 4) == 3 * a + 4 * b + c
    assert form.shift_k(2).eval_int(3, 4) == form.eval_int(3, 6)
    assert form.shift_n(-1).eval_int(3, 4) == form.eval_int(2, 4)


def test_non_integer_form_rejected_in_binomial():
    from abelsum.dsl import DslError

    with pytest.raises((DslError, TermError)):
        parse_term("C(n, k/2)")


# -- support -----------------------------------------------------------------


def test_support_bounds_track_n():
    sup = Support(LinearForm(c=mpq(1)), LinearForm(n=1))
    assert sup.at(5) == (1, 5)
    sup2 = Support(LinearForm(c=mpq(0)), LinearForm(n=2))
    assert sup2.at(3) == (0, 6)
