"""A short tour of indefinite hypergeometric summation.

A term t_k is hypergeometric when the consecutive ratio t_{k+1}/t_k is a
rational function of k.  Gosper's algorithm decides whether such a term
has a hypergeometric antidifference a_k (a_{k+1} - a_k = t_k) and, when
it does, returns the certificate R(k) with a_k = R(k) t_k.  Everything
below is exact rational arithmetic; there are no floats anywhere.
"""

import math

from abelsum import gosper, parse_term, render_ratfunc
from abelsum.terms import rf2_eval

# ---------------------------------------------------------------------------
# A classic telescoping sum: 1/(k(k+1)) = 1/k - 1/(k+1)
# ---------------------------------------------------------------------------

term = parse_term("rat(1/(k*(k+1)))")
cert = gosper(term.ratio_k())
print("term      t_k = 1/(k(k+1))")
print("certificate R =", render_ratfunc(cert))

# check the defining property numerically on a stretch of k:
# with a_k = R(k) t_k we must have a_{k+1} - a_k = t_k
for k in range(1, 8):
    a = rf2_eval(cert, 0, k) * term.eval(0, k)
    a1 = rf2_eval(cert, 0, k + 1) * term.eval(0, k + 1)
    assert a1 - a == term.eval(0, k)
print("telescoping checked for k = 1..7")
print()

# ---------------------------------------------------------------------------
# A term involving a factorial: sum of k * k! telescopes to (n+1)! - 1
# ---------------------------------------------------------------------------

term = parse_term("rat(k) * fact(k)")
cert = gosper(term.ratio_k())
print("term      t_k = k * k!")
print("certificate R =", render_ratfunc(cert))
n = 6
partial = sum(term.eval(0, k) for k in range(1, n + 1))
print("sum_{k=1}^6 k*k! =", partial, "  (expect 7! - 1 =", math.factorial(7) - 1, ")")
print()

# ---------------------------------------------------------------------------
# Gosper can also say no, and the verdict is a theorem, not a timeout
# ---------------------------------------------------------------------------

for src in ("rat(1/k)", "C(n,k)"):
    verdict = gosper(parse_term(src).ratio_k())
    print(f"{src:12s} summable: {verdict is not None}")
print()
print("1/k has no hypergeometric antidifference: its partial sums are the")
print("harmonic numbers H_n, which are not a hypergeometric sequence.")
