"""Harmonic weights: values, forward differences, degree bookkeeping."""

import random

from gmpy2 import mpq

from abelsum.dsl import parse_weight
from abelsum.weights import (
    HarmonicAtom,
    WeightExpr,
    delta_weight,
    harmonic_eval,
    harmonic_number,
)


def test_harmonic_values():
    assert harmonic_number(5) == mpq(137, 60)
    assert harmonic_number(3, r=2) == mpq(49, 36)
    assert harmonic_number(0) == 0
    assert harmonic_number(-4) == 0


def test_shifted_harmonic_values():
    # H_3(1/2) = 1/(3/2) + 1/(5/2) + 1/(7/2)
    assert harmonic_number(3, x=mpq(1, 2)) == mpq(142, 105)
    assert harmonic_number(2, r=2, x=mpq(1)) == mpq(13, 36)


def test_harmonic_prefix_recurrence():
    for r in (1, 2, 3):
        for x in (mpq(0), mpq(1, 2), mpq(5, 3)):
            acc = mpq(0)
            for idx in range(1, 30):
                acc += 1 / (idx + x) ** r
                assert harmonic_number(idx, r=r, x=x) == acc


def test_atom_eval_tracks_index():
    atom = HarmonicAtom(r=1, m=2, s=1, x=mpq(0), mn=0)
    for n in (0, 4):
        for k in range(0, 6):
            assert harmonic_eval(atom, n, k) == harmonic_number(2 * k + 1)


def test_atom_with_n_component():
    atom = HarmonicAtom(r=1, m=1, s=0, x=mpq(0), mn=1)
    assert harmonic_eval(atom, 3, 2) == harmonic_number(5)


def test_weight_eval_matches_direct_sum():
    w = parse_weight("H(k)^2 + H^(2)(k)")
    for n in (0, 3):
        for k in range(0, 8):
            expected = harmonic_number(k) ** 2 + harmonic_number(k, r=2)
            assert w.eval(n, k) == expected


def test_delta_weight_is_forward_difference():
    rng = random.Random(41)
    cases = [
        "H(k)",
        "H(k)^2",
        "H(k)^3",
        "H^(2)(k)",
        "H(2*k+1)",
        "Hx(k; 1/2)",
        "H(k) * H^(2)(k)",
        "Hx(3*k+2; 5/3)",
    ]
    for src in cases:
        w = parse_weight(src)
        ((atoms, _),) = w.monomials
        dw = delta_weight(atoms)
        for _ in range(8):
            n = rng.randint(0, 6)
            k = rng.randint(0, 10)
            assert dw.eval(n, k) == w.eval(n, k + 1) - w.eval(n, k), (src, n, k)


def test_delta_weight_strictly_drops_degree():
    for src in ["H(k)", "H(k)^2", "H(k)^3", "H(k) * H^(2)(k)"]:
        w = parse_weight(src)
        ((atoms, _),) = w.monomials
        assert delta_weight(atoms).degree() < len(atoms)


def test_collect_merges_duplicates():
    w = parse_weight("H(k) + H(k)")
    assert len(w.monomials) == 1
    for k in range(5):
        assert w.eval(0, k) == 2 * harmonic_number(k)


def test_one_weight():
    one = WeightExpr.one()
    assert one.is_one()
    assert one.eval(3, 4) == 1
    assert one.degree() == 0
