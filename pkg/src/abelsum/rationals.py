"""Exact rational scalars.

Every number in the engine is an arbitrary-precision rational; there is no
floating point anywhere.  gmpy2.mpq provides the arithmetic (always stored
in lowest terms with positive denominator).
"""

from __future__ import annotations

from gmpy2 import mpq

Rat = mpq

RAT_ZERO = mpq(0)
RAT_ONE = mpq(1)


def rat(a, b=1) -> Rat:
    """Build an exact rational from ints, strings like '5/3', or rationals."""
    return mpq(a, b)


def is_integral(q) -> bool:
    return q.denominator == 1


def as_int(q) -> int:
    if q.denominator != 1:
        raise ValueError(f"expected an integer, got {q}")
    return int(q.numerator)


def floor_div(q, d: int) -> int:
    """floor(q / d) for rational q and positive integer d."""
    v = mpq(q, d)
    return v.numerator // v.denominator
