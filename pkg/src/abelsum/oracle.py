"""Brute-force evaluation, independent of the summation algorithms.

This module is the oracle the verifier trusts: it only ever evaluates
terms, weights and closed-form expressions pointwise, and never imports
the gosper/zeilberger/abel machinery.  Keeping the dependency direction
strict is what makes catalog verification meaningful.
"""

from __future__ import annotations

import math

from gmpy2 import mpq

from .dsl import eval_closed
from .poly import RatFunc
from .rationals import Rat
from .terms import RF2_ONE, LinearForm, Support, TermExpr, rf2_const
from .weights import WeightExpr


class OracleError(Exception):
    pass


def brute_eval(
    term: TermExpr, weight: WeightExpr, support: Support, n: int
) -> Rat:
    """Direct term-by-term summation of sum_k term(n,k) * weight(n,k)."""
    lo, hi = support.at(n)
    total = mpq(0)
    for k in range(lo, hi + 1):
        try:
            total += term.eval(n, k) * weight.eval(n, k)
        except Exception as exc:
            raise OracleError(f"undefined summand at k={k}: {exc}") from exc
    return total


def brute_eval_prefix_cubes(n: int) -> Rat:
    """sum_{k=0..n} (sum_{j=0..k} C(n,j))^3 via prefix sums."""
    total = mpq(0)
    prefix = 0
    for k in range(n + 1):
        prefix += math.comb(n, k)
        total += mpq(prefix) ** 3
    return total


_RF2_K = RatFunc.from_poly(LinearForm(k=1).as_poly_k())


def random_hypergeometric_ratio(rng) -> RatFunc:
    """Consecutive ratio t_{k+1}/t_k of a random hypergeometric term:
    a rational constant times a quotient of integer-shifted linear
    factors.  Never the constant 1, so Delta t is a nonzero term."""
    while True:
        r = rf2_const(mpq(rng.choice([-1, 1]) * rng.randint(1, 4), rng.randint(1, 4)))
        for _ in range(rng.randint(0, 2)):
            r = r * (_RF2_K + rf2_const(rng.randint(-3, 3)))
        for _ in range(rng.randint(0, 2)):
            r = r / (_RF2_K + rf2_const(rng.randint(-3, 3)))
        if r != RF2_ONE:
            return r


def random_summable_ratio(rng) -> RatFunc:
    """Consecutive ratio of u = Delta t for a random hypergeometric t.

    By construction u has the hypergeometric antidifference t, so an
    indefinite-summation certificate must exist; pairing this generator
    with the certificate check gives a soundness test with a known
    answer.  Ratio: u(k+1)/u(k) = (r(k+1) - 1) r(k) / (r(k) - 1)."""
    while True:
        r = random_hypergeometric_ratio(rng)
        num = r.shift(1) - RF2_ONE
        den = r - RF2_ONE
        if num.is_zero() or den.is_zero():
            continue
        return num * r / den


def eval_closed_form(ast, n: int, params: dict | None = None) -> Rat:
    """Evaluate a parsed closed-form expression at integer n."""
    env = {"n": mpq(n)}
    if params:
        env.update({name: mpq(v) for name, v in params.items()})
    return eval_closed(ast, env)
