"""Deriving harmonic-number identities by summation by parts.

Two worked derivations.  The first strips the harmonic weight from

    sum_{k=1}^{n} (-1)^(k-1) C(n,k) H_k  =  1/n

by one application of Abel's lemma (summation by parts), with Gosper's
algorithm supplying the antidifference of the hypergeometric factor.
The second pairs Abel's lemma with a WZ certificate to recover the
alternating zeta(2) partial sums

    sum_{k=0}^{n} (-1)^(n-k) C(n,k) C(n+k,k) H_k^(2)
        =  2 sum_{k=1}^{n} (-1)^(k-1) / k^2.

Every step is recorded in a replayable proof trace.
"""

from gmpy2 import mpq

from abelsum import (
    LinearForm,
    SumSpec,
    Support,
    abel_gosper_pipeline,
    abel_wz_pipeline,
    parse_term,
    parse_weight,
)

# ---------------------------------------------------------------------------
# Abel-Gosper: alternating binomial sum with harmonic weight
# ---------------------------------------------------------------------------

spec = SumSpec(
    parse_term("(-1)^(k-1) * C(n,k)"),
    parse_weight("H(k)"),
    Support(LinearForm(c=mpq(1)), LinearForm(n=1)),
)
result = abel_gosper_pipeline(spec)

print("derivation trace")
print("----------------")
print(result.trace.render())
print()
print("closed form:", result.closed_form.render())
print()
print(" n   pipeline   brute    1/n")
for n in range(1, 9):
    print(f"{n:2d}   {str(result.ev(n)):>7s}  {str(spec.brute(n)):>7s}  {str(mpq(1, n)):>5s}")
assert all(result.ev(n) == mpq(1, n) for n in range(1, 13))
print()
print("trace replays cleanly:", result.trace.replay([3, 5, 9]))
print()

# ---------------------------------------------------------------------------
# Abel-WZ: a definite sum that is not Gosper-summable in k
# ---------------------------------------------------------------------------

F = parse_term("(-1)^(n-k) * C(n,k) * C(n+k,k)")
f = parse_term("rat(1)")  # the WZ normalization: F(n,k)/f(n) sums to a constant
weight = parse_weight("H^(2)(k)")
support = Support(LinearForm(c=mpq(0)), LinearForm(n=1))
spec = SumSpec(F, weight, support)

result = abel_wz_pipeline(F, f, weight, spec.brute(0), support, n0=0)
print("WZ-based derivation")
print("-------------------")
print(result.trace.render())
print()
print(" n   S(n)          2*sum (-1)^(k-1)/k^2")
for n in range(0, 7):
    rhs = 2 * sum(mpq(-1) ** (j - 1) / mpq(j) ** 2 for j in range(1, n + 1))
    print(f"{n:2d}   {str(result.ev(n)):>12s}  {str(rhs):>12s}")
    assert result.ev(n) == rhs == spec.brute(n)
