"""Dense univariate polynomials and rational functions over a pluggable field.

Two field instantiations are used in practice: QQ (exact rationals) and
QN = QQ(n) (rational functions in n), giving polynomials in k with
coefficients that may themselves be rational functions of n.

All values are immutable after construction and all operations are pure.
"""

from __future__ import annotations

import itertools
import math
import random as _random

from gmpy2 import is_prime as _is_prime
from gmpy2 import mpq

from .rationals import Rat, as_int, is_integral


class PolynomialError(Exception):
    pass


class RationalField:
    """The field of exact rationals."""

    name = "QQ"

    def __init__(self):
        self.zero = mpq(0)
        self.one = mpq(1)

    def of(self, v):
        return mpq(v)

    def __repr__(self):
        return "QQ"


QQ = RationalField()


class UniPoly:
    """Dense univariate polynomial, coefficients lowest degree first.

    The zero polynomial has an empty coefficient tuple; otherwise the
    leading coefficient is nonzero.
    """

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field, coeffs):
        coeffs = tuple(coeffs)
        n = len(coeffs)
        while n and not coeffs[n - 1]:
            n -= 1
        self.field = field
        self.coeffs = coeffs[:n]
        self._hash = None

    # -- constructors -------------------------------------------------

    @staticmethod
    def const(field, v):
        return UniPoly(field, (field.of(v),))

    @staticmethod
    def zero(field):
        return UniPoly(field, ())

    @staticmethod
    def one(field):
        return UniPoly(field, (field.one,))

    @staticmethod
    def var(field):
        return UniPoly(field, (field.zero, field.one))

    # -- basic queries ------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self):
        if not self.coeffs:
            raise PolynomialError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, UniPoly)
            and self.coeffs == other.coeffs
            and self.field.name == other.field.name
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.name, self.coeffs))
        return self._hash

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return UniPoly(self.field, out)

    def __neg__(self):
        return UniPoly(self.field, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly.zero(self.field)
        zero = self.field.zero
        out = [zero] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                out[i + j] = out[i + j] + ca * cb
        return UniPoly(self.field, out)

    def scale(self, s):
        return UniPoly(self.field, tuple(c * s for c in self.coeffs))

    def __pow__(self, e: int):
        if e < 0:
            raise PolynomialError("negative polynomial power")
        r = UniPoly.one(self.field)
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def divmod(self, other):
        """Exact field division with remainder; other must be nonzero."""
        if other.is_zero():
            raise PolynomialError("division by zero polynomial")
        field = self.field
        rem = list(self.coeffs)
        d = other.degree
        lc = other.lc
        if len(rem) - 1 < d:
            return UniPoly.zero(field), self
        quo = [field.zero] * (len(rem) - d)
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i]
            if not c:
                continue
            q = c / lc
            quo[i - d] = q
            for j, oc in enumerate(other.coeffs):
                rem[i - d + j] = rem[i - d + j] - q * oc
        return UniPoly(field, quo), UniPoly(field, rem)

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other):
        q, r = self.divmod(other)
        if not r.is_zero():
            raise PolynomialError("inexact polynomial division")
        return q

    def monic(self):
        if self.is_zero():
            return self
        lc = self.lc
        if lc == self.field.one:
            return self
        return self.scale(self.field.one / lc)

    # -- evaluation and shifting -------------------------------------

    def eval_at(self, x):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift(self, j):
        """p(X + j); shift(shift(p, a), b) == shift(p, a + b)."""
        if self.degree <= 0 or not j:
            return self
        field = self.field
        jv = field.of(j)
        # Horner in the shifted variable.
        acc = UniPoly.zero(field)
        lin = UniPoly(field, (jv, field.one))
        for c in reversed(self.coeffs):
            acc = acc * lin + UniPoly(field, (c,))
        return acc

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                parts.append(f"{c}")
            elif i == 1:
                parts.append(f"({c})*X")
            else:
                parts.append(f"({c})*X^{i}")
        return " + ".join(parts)


def poly_gcd(p: UniPoly, q: UniPoly) -> UniPoly:
    """Monic greatest common divisor; gcd(0, 0) = 0."""
    if isinstance(p.field, FractionField) and p.degree > 0 and q.degree > 0:
        return _fraction_poly_gcd(p, q)
    while not q.is_zero():
        p, q = q, p % q
    return p.monic()


def _clear_coeff_denoms(p: UniPoly) -> list:
    """Coefficients of p as base-ring polynomials (denominators cleared)."""
    base = p.field.base
    den = UniPoly.one(base)
    for c in p.coeffs:
        den = poly_lcm(den, c.denom)
    return [c.numer * den.exact_div(c.denom) for c in p.coeffs]


def _coeff_content(polys) -> UniPoly:
    g = None
    for c in polys:
        g = c.monic() if g is None else poly_gcd(g, c)
        if g.degree == 0:
            break
    return g


def _make_primitive(polys) -> list:
    while polys and polys[-1].is_zero():
        polys.pop()
    if not polys:
        return polys
    content = _coeff_content(polys)
    if content.degree > 0:
        polys = [c.exact_div(content) for c in polys]
    return polys


def _pseudo_rem(a: list, b: list) -> list:
    """Pseudo-remainder of coefficient lists over the base polynomial ring."""
    a = list(a)
    d = b[-1]
    steps = len(a) - len(b) + 1
    for _ in range(steps):
        if len(a) < len(b):
            break
        top = a[-1]
        a = [c * d for c in a[:-1]]
        if top:
            off = len(a) - (len(b) - 1)
            for j, bc in enumerate(b[:-1]):
                a[off + j] = a[off + j] - top * bc
        while a and a[-1].is_zero():
            a.pop()
    return a


def _fraction_poly_gcd(p: UniPoly, q: UniPoly) -> UniPoly:
    """gcd over a fraction field QQ(t) by a primitive pseudo-remainder
    sequence on cleared coefficients, with a specialization shortcut for
    the (common) coprime case."""
    field = p.field
    a = _make_primitive(_clear_coeff_denoms(p))
    b = _make_primitive(_clear_coeff_denoms(q))
    if len(a) < len(b):
        a, b = b, a
    # coprimality shortcut: a good specialization preserving both degrees
    # can only enlarge the gcd, so a trivial specialized gcd is conclusive
    for t0 in (17, 101, 37, 1009, 57):
        x = mpq(t0)
        if not a[-1].eval_at(x) or not b[-1].eval_at(x):
            continue
        a0 = UniPoly(QQ, [c.eval_at(x) for c in a])
        b0 = UniPoly(QQ, [c.eval_at(x) for c in b])
        while not b0.is_zero():
            a0, b0 = b0, a0 % b0
        if a0.degree == 0:
            return UniPoly.one(field)
        break
    while len(b) > 1:
        r = _make_primitive(_pseudo_rem(a, b))
        if not r:
            break
        a, b = b, r
    if len(b) == 1:
        return UniPoly.one(field)
    g = b if b else a
    return UniPoly(field, [RatFunc.from_poly(c) for c in g]).monic()


def poly_lcm(p: UniPoly, q: UniPoly) -> UniPoly:
    if p.is_zero() or q.is_zero():
        return UniPoly.zero(p.field)
    g = poly_gcd(p, q)
    return (p * q).exact_div(g).monic()


def shift(p: UniPoly, j) -> UniPoly:
    return p.shift(j)


def resultant(p: UniPoly, q: UniPoly):
    """Resultant via the Sylvester determinant (row order: q-rows under p-rows).

    Sign convention: the determinant of the Sylvester matrix whose first
    deg(q) rows carry the coefficients of p and the remaining deg(p) rows
    carry the coefficients of q, e.g. resultant(k, k - 1) = -1.
    """
    if p.is_zero() or q.is_zero():
        raise PolynomialError("resultant of zero polynomial")
    m, n = p.degree, q.degree
    field = p.field
    if m == 0:
        return p.lc ** n
    if n == 0:
        return q.lc ** m
    size = m + n
    rows = []
    pc = list(reversed(p.coeffs))
    qc = list(reversed(q.coeffs))
    for i in range(n):
        rows.append([field.zero] * i + pc + [field.zero] * (n - 1 - i))
    for i in range(m):
        rows.append([field.zero] * i + qc + [field.zero] * (m - 1 - i))
    return _determinant(rows, field)


def _determinant(rows, field):
    n = len(rows)
    det = field.one
    sign = 1
    for col in range(n):
        piv = None
        for r in range(col, n):
            if rows[r][col]:
                piv = r
                break
        if piv is None:
            return field.zero
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            sign = -sign
        pv = rows[col][col]
        det = det * pv
        for r in range(col + 1, n):
            f = rows[r][col]
            if not f:
                continue
            f = f / pv
            rows[r] = [rc - f * cc for rc, cc in zip(rows[r], rows[col])]
    return det if sign > 0 else -det


def _eval_int(coeffs, x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _mp_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _mp_rem(a, b, p):
    """Remainder of a modulo b, coefficient lists over GF(p)."""
    a = list(a)
    inv = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        f = a[-1] * inv % p
        off = len(a) - len(b)
        if f:
            for j, bc in enumerate(b):
                a[off + j] = (a[off + j] - f * bc) % p
        a.pop()
        _mp_trim(a)
    return a


def _mp_gcd(a, b, p):
    while b:
        a, b = b, _mp_rem(a, b, p)
    inv = pow(a[-1], p - 2, p)
    return [c * inv % p for c in a]


def _mp_mulmod(a, b, mod, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ac in enumerate(a):
        if ac:
            for j, bc in enumerate(b):
                out[i + j] = (out[i + j] + ac * bc) % p
    return _mp_rem(_mp_trim(out), mod, p)


def _mp_powmod(base, e, mod, p):
    result = [1]
    base = _mp_rem(base, mod, p)
    while e:
        if e & 1:
            result = _mp_mulmod(result, base, mod, p)
        e >>= 1
        if e:
            base = _mp_mulmod(base, base, mod, p)
    return result


def _mp_roots(a, p) -> list[int]:
    """All roots in GF(p) of a squarefree coefficient list, p an odd prime."""
    # isolate the product of linear factors: gcd(x^p - x, a)
    h = _mp_powmod([0, 1], p, a, p)
    h = list(h) + [0] * max(0, 2 - len(h))
    h[1] = (h[1] - 1) % p
    h = _mp_trim(h)
    if h:
        g = _mp_gcd(a, h, p)
    else:
        inv = pow(a[-1], p - 2, p)
        g = [c * inv % p for c in a]
    roots = []
    rng = _random.Random(0xA8E1)
    stack = [g]
    while stack:
        f = stack.pop()
        if len(f) <= 1:
            continue
        if len(f) == 2:
            roots.append(-f[0] * pow(f[1], p - 2, p) % p)
            continue
        while True:
            c = rng.randrange(p)
            h = _mp_powmod([c, 1], (p - 1) // 2, f, p)
            if h:
                h = list(h)
                h[0] = (h[0] - 1) % p
            else:
                h = [p - 1]
            h = _mp_trim(h)
            if not h:
                continue
            d = _mp_gcd(f, h, p)
            if 1 < len(d) < len(f):
                stack.append(d)
                stack.append(_mp_trim(_mp_quot(f, d, p)))
                break
    return roots


def _mp_quot(a, b, p):
    """Exact quotient a / b over GF(p)."""
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    inv = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        f = a[-1] * inv % p
        q[len(a) - len(b)] = f
        off = len(a) - len(b)
        if f:
            for j, bc in enumerate(b):
                a[off + j] = (a[off + j] - f * bc) % p
        a.pop()
        _mp_trim(a)
    return q


def _lift_root(ints, dints, r: int, p: int, target: int) -> int:
    """Hensel-lift a simple root of ints mod p to a modulus above target."""
    m = p
    while m <= target:
        m *= m
        fr = _eval_int(ints, r) % m
        dr = _eval_int(dints, r) % m
        r = (r - fr * pow(dr, -1, m)) % m
    return r


def integer_roots(p: UniPoly) -> set[int]:
    """All integer roots of a nonzero polynomial over QQ.

    Small root bounds are handled by direct search.  Otherwise roots of
    the squarefree part are found modulo a prime at which it remains
    squarefree, Hensel-lifted past twice the Cauchy bound, and checked
    exactly, which stays cheap even for huge coefficients.
    """
    if p.is_zero():
        raise PolynomialError("integer_roots of zero polynomial")
    roots = set()
    coeffs = list(p.coeffs)
    # factor out powers of X
    low = 0
    while not coeffs[low]:
        low += 1
    if low:
        roots.add(0)
        coeffs = coeffs[low:]
    if len(coeffs) == 1:
        return roots
    den_lcm = 1
    for c in coeffs:
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, int(c.denominator))
    ints = [int(c * den_lcm) for c in coeffs]
    content = 0
    for c in ints:
        content = math.gcd(content, c)
    if content > 1:
        ints = [c // content for c in ints]
    lead = ints[-1]
    # Cauchy-style bound on the magnitude of any root
    bound = 1 + max(abs(c) for c in ints[:-1]) // abs(lead) + 1
    if bound <= 2048:
        for r in range(-bound, bound + 1):
            if r and not _eval_int(ints, r):
                roots.add(r)
        return roots
    # squarefree part over QQ
    q = UniPoly(QQ, [mpq(c) for c in ints])
    dq = UniPoly(QQ, [mpq(i * c) for i, c in enumerate(ints)][1:])
    g = poly_gcd(q, dq)
    sq = q.exact_div(g) if g.degree > 0 else q
    s_lcm = 1
    for c in sq.coeffs:
        s_lcm = s_lcm * c.denominator // math.gcd(s_lcm, int(c.denominator))
    sints = [int(c * s_lcm) for c in sq.coeffs]
    dsints = [i * c for i, c in enumerate(sints)][1:]
    prime = (1 << 30) + 3
    for _ in range(50):
        while not _is_prime(prime):
            prime += 2
        a = _mp_trim([c % prime for c in sints])
        da = _mp_trim([c % prime for c in dsints])
        # need the leading coefficient alive and squarefreeness preserved
        if len(a) == len(sints) and da and len(_mp_gcd(a, da, prime)) == 1:
            break
        prime += 2
    else:
        raise PolynomialError("no usable prime for modular root search")
    for r0 in _mp_roots(a, prime):
        r = _lift_root(sints, dsints, r0, prime, 2 * bound)
        m = prime
        while m <= 2 * bound:
            m *= m
        if r > m // 2:
            r -= m
        if abs(r) <= bound and not _eval_int(ints, r):
            roots.add(r)
    return roots


class RatFunc:
    """Canonical rational function: monic coprime denominator.

    Equality is decidable and structural; two equal values have identical
    numerator/denominator pairs.
    """

    __slots__ = ("numer", "denom", "_hash")

    def __init__(self, numer: UniPoly, denom: UniPoly, _canonical=False):
        if denom.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not _canonical:
            if numer.is_zero():
                denom = UniPoly.one(numer.field)
            else:
                if denom.degree > 0 or numer.degree > 0:
                    g = poly_gcd(numer, denom)
                    if g.degree > 0:
                        numer = numer.exact_div(g)
                        denom = denom.exact_div(g)
                lc = denom.lc
                if lc != denom.field.one:
                    inv = denom.field.one / lc
                    numer = numer.scale(inv)
                    denom = denom.scale(inv)
        self.numer = numer
        self.denom = denom
        self._hash = None

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_poly(p: UniPoly):
        return RatFunc(p, UniPoly.one(p.field), _canonical=True)

    @staticmethod
    def const(field, v):
        return RatFunc(UniPoly.const(field, v), UniPoly.one(field), _canonical=True)

    @staticmethod
    def var(field):
        return RatFunc(UniPoly.var(field), UniPoly.one(field), _canonical=True)

    # -- queries ------------------------------------------------------

    def is_zero(self):
        return self.numer.is_zero()

    def __bool__(self):
        return not self.numer.is_zero()

    def is_poly(self):
        return self.denom.degree == 0

    def is_const(self):
        return self.numer.degree <= 0 and self.denom.degree == 0

    def as_const(self):
        if not self.is_const():
            raise PolynomialError(f"not a constant: {self!r}")
        if self.numer.is_zero():
            return self.field.zero
        return self.numer.coeffs[0] / self.denom.coeffs[0]

    @property
    def field(self):
        return self.numer.field

    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.numer == other.numer and self.denom == other.denom

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.numer, self.denom))
        return self._hash

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        if self.denom == other.denom:
            return RatFunc(self.numer + other.numer, self.denom)
        return RatFunc(
            self.numer * other.denom + other.numer * self.denom,
            self.denom * other.denom,
        )

    def __neg__(self):
        return RatFunc(-self.numer, self.denom, _canonical=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return RatFunc(self.numer * other.numer, self.denom * other.denom)

    def __truediv__(self, other):
        if other.numer.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.numer * other.denom, self.denom * other.numer)

    def inverse(self):
        if self.numer.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        return RatFunc(self.denom, self.numer)

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return RatFunc(self.numer ** e, self.denom ** e)

    def scale(self, s):
        return RatFunc(self.numer.scale(s), self.denom, _canonical=True)

    def eval_at(self, x):
        d = self.denom.eval_at(x)
        if not d:
            raise ZeroDivisionError(f"pole of rational function at {x}")
        return self.numer.eval_at(x) / d

    def shift(self, j):
        return RatFunc(self.numer.shift(j), self.denom.shift(j))

    def __repr__(self):
        if self.denom.degree == 0 and self.denom.coeffs[0] == self.field.one:
            return f"({self.numer!r})"
        return f"({self.numer!r})/({self.denom!r})"


class FractionField:
    """The field of fractions of QQ[var]; elements are RatFunc values."""

    def __init__(self, base, varname: str):
        self.base = base
        self.varname = varname
        self.name = f"{base.name}({varname})"
        self.zero = RatFunc.from_poly(UniPoly.zero(base))
        self.one = RatFunc.from_poly(UniPoly.one(base))
        self.gen = RatFunc.var(base)

    def of(self, v):
        if isinstance(v, RatFunc):
            return v
        if isinstance(v, UniPoly):
            return RatFunc.from_poly(v)
        return RatFunc.const(self.base, self.base.of(v))

    def __repr__(self):
        return self.name


QN = FractionField(QQ, "n")


def solve_linear(rows, rhs, field):
    """Exact Gaussian elimination for A x = v over a field.

    Returns (particular, kernel_basis) with free variables set to zero,
    or None when the system is inconsistent.  Accepts empty systems.
    """
    m = len(rows)
    if any(len(r) != (len(rows[0]) if m else 0) for r in rows):
        raise PolynomialError("ragged coefficient matrix")
    if m != len(rhs):
        raise PolynomialError("matrix/vector dimension mismatch")
    ncols = len(rows[0]) if m else 0
    a = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    pivots = []
    row = 0
    for col in range(ncols):
        piv = None
        for r in range(row, m):
            if a[r][col]:
                piv = r
                break
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        pv = a[row][col]
        a[row] = [c / pv for c in a[row]]
        for r in range(m):
            if r != row and a[r][col]:
                f = a[r][col]
                a[r] = [rc - f * pc for rc, pc in zip(a[r], a[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    for r in range(row, m):
        if a[r][ncols]:
            return None
    free = [c for c in range(ncols) if c not in pivots]
    particular = [field.zero] * ncols
    for r, col in enumerate(pivots):
        particular[col] = a[r][ncols]
    kernel = []
    for fc in free:
        vec = [field.zero] * ncols
        vec[fc] = field.one
        for r, col in enumerate(pivots):
            vec[col] = -a[r][fc]
        kernel.append(vec)
    return particular, kernel


def lagrange_interpolate(points, field):
    """The unique polynomial of degree < len(points) through the given
    (x, y) pairs; x values must be distinct field elements."""
    result = UniPoly.zero(field)
    xs = [x for x, _ in points]
    for i, (xi, yi) in enumerate(points):
        if not yi:
            continue
        basis = UniPoly.one(field)
        denom = field.one
        for j, xj in enumerate(xs):
            if i == j:
                continue
            basis = basis * UniPoly(field, (-xj, field.one))
            denom = denom * (xi - xj)
        result = result + basis.scale(yi / denom)
    return result
