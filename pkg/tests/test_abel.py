"""Summation by parts and the two derivation pipelines."""

import random

import pytest
from gmpy2 import mpq

from abelsum.abel import (
    AbelError,
    GosperFailed,
    ProofTrace,
    SumSpec,
    abel_gosper_pipeline,
    abel_step,
    abel_wz_pipeline,
    eval_telescoped,
)
from abelsum.dsl import parse_term, parse_weight
from abelsum.terms import EvalDomainError, LinearForm, Support


def make_spec(term_src, weight_src, lo=1, params=None):
    return SumSpec(
        parse_term(term_src, params or {}),
        parse_weight(weight_src, params or {}),
        Support(LinearForm(c=mpq(lo)), LinearForm(n=1)),
    )


# -- Abel's lemma on raw sequences -------------------------------------------


def test_abel_lemma_random_sequences():
    """sum_{k=a}^{b} b_k (a_{k+1}-a_k)
       = a_{b+1} b_{b+1} - a_a b_a - sum_{k=a}^{b} a_{k+1} (b_{k+1}-b_k)."""
    rng = random.Random(17)
    for _ in range(50):
        lo = rng.randint(-3, 2)
        hi = lo + rng.randint(0, 12)
        a = {k: mpq(rng.randint(-9, 9), rng.randint(1, 7))
             for k in range(lo, hi + 2)}
        b = {k: mpq(rng.randint(-9, 9), rng.randint(1, 7))
             for k in range(lo, hi + 2)}
        lhs = sum(b[k] * (a[k + 1] - a[k]) for k in range(lo, hi + 1))
        rhs = (
            a[hi + 1] * b[hi + 1]
            - a[lo] * b[lo]
            - sum(a[k + 1] * (b[k + 1] - b[k]) for k in range(lo, hi + 1))
        )
        assert lhs == rhs


# -- abel_step invariants ----------------------------------------------------

STEPPABLE = [
    ("(-1)^(k-1) * C(n,k)", "H(k)"),
    ("(-1)^(k-1) * C(n,k)", "H(k)^2"),
    ("(-1)^(k-1) * C(n,k) * C(k,p)", "H(2*k+1)"),
    ("rat(1)", "H(k)"),
    ("(-1)^(k-1) * C(n,k)", "Hx(k; 1/2)"),
]


@pytest.mark.parametrize("term_src,weight_src", STEPPABLE)
def test_abel_step_preserves_value(term_src, weight_src):
    spec = make_spec(term_src, weight_src, params={"p": mpq(1)})
    transformed, boundary = abel_step(spec)
    for n in (3, 5, 8):
        direct = spec.brute(n)
        stepped = boundary.ev(n) + sum(s.brute(n) for s in transformed)
        assert stepped == direct, n


@pytest.mark.parametrize("term_src,weight_src", STEPPABLE)
def test_abel_step_drops_weight_degree(term_src, weight_src):
    spec = make_spec(term_src, weight_src, params={"p": mpq(1)})
    transformed, _ = abel_step(spec)
    before = spec.weight.degree()
    for s in transformed:
        assert s.weight.degree() < before


def test_abel_step_rejects_degree_zero_weight():
    spec = make_spec("C(n,k)", "1")
    with pytest.raises(AbelError):
        abel_step(spec)


def test_abel_step_not_summable_term():
    spec = make_spec("rat(1/k)", "H(k)")
    with pytest.raises(GosperFailed):
        abel_step(spec)


def test_abel_step_trace_checks_replay():
    spec = make_spec("(-1)^(k-1) * C(n,k)", "H(k)")
    trace = ProofTrace()
    abel_step(spec, trace)
    assert trace.replay([2, 4, 6])


# -- pole-avoiding evaluation ------------------------------------------------


def test_eval_telescoped_pole_fallback():
    vals = {k: mpq(k) ** 2 for k in range(-10, 11)}

    def value(k):
        if k == 4:
            raise EvalDomainError("synthetic pole")
        return vals[k]

    def delta(k):
        return vals[k + 1] - vals[k]

    assert eval_telescoped(value, delta, 4) == 16


def test_eval_telescoped_no_window():
    def value(k):
        raise EvalDomainError("nowhere defined")

    with pytest.raises(AbelError):
        eval_telescoped(value, lambda k: mpq(0), 0, radius=5)


# -- pipelines ---------------------------------------------------------------


def test_gosper_pipeline_alternating_harmonic():
    # sum_{k=1}^{n} (-1)^(k-1) C(n,k) H_k = 1/n
    spec = make_spec("(-1)^(k-1) * C(n,k)", "H(k)")
    result = abel_gosper_pipeline(spec)
    assert not result.reduced
    for n in range(1, 12):
        assert result.ev(n) == mpq(1, n)


def test_gosper_pipeline_plain_harmonic():
    # sum_{k=1}^{n} H_k = (n+1) H_n - n
    from abelsum.weights import harmonic_number

    spec = make_spec("rat(1)", "H(k)")
    result = abel_gosper_pipeline(spec)
    for n in range(1, 10):
        assert result.ev(n) == (n + 1) * harmonic_number(n) - n


def test_gosper_pipeline_matches_brute_on_squared_weight():
    spec = make_spec("(-1)^(k-1) * C(n,k)", "H(k)^2")
    result = abel_gosper_pipeline(spec)
    for n in range(2, 10):
        assert result.ev(n) == spec.brute(n)


def test_wz_pipeline_reproduces_alternating_zeta2():
    F = parse_term("(-1)^(n-k) * C(n,k) * C(n+k,k)")
    f = parse_term("rat(1)")
    weight = parse_weight("H^(2)(k)")
    support = Support(LinearForm(c=mpq(0)), LinearForm(n=1))
    spec = SumSpec(F, weight, support)
    result = abel_wz_pipeline(F, f, weight, spec.brute(0), support, n0=0)
    for n in range(0, 10):
        expected = 2 * sum(
            mpq(-1) ** (j - 1) / mpq(j) ** 2 for j in range(1, n + 1)
        )
        assert result.ev(n) == expected
        assert result.ev(n) == spec.brute(n)


def test_pipeline_trace_replay():
    spec = make_spec("(-1)^(k-1) * C(n,k)", "H(k)")
    result = abel_gosper_pipeline(spec)
    assert result.trace.replay([3, 5])
