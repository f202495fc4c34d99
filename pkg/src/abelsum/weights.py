"""Harmonic-number weights and their forward differences.

A weight is a sum of monomials; each monomial is a product of harmonic
atoms H^{(r)}_{m*k + mn*n + s}(x) with a rational-function coefficient in
k over QQ(n).  The forward difference of a pure atom product expands by
the subset formula and strictly lowers the harmonic degree, which is what
makes the Abel iteration terminate.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .poly import QN, QQ, RatFunc, UniPoly
from .rationals import Rat
from .terms import RF2_ONE, rf2_const, rf2_eval


class WeightError(Exception):
    pass


@dataclass(frozen=True)
class HarmonicAtom:
    """H^{(r)}_{m*k + mn*n + s}(x); zero whenever the index is <= 0."""

    r: int = 1
    m: int = 1
    s: int = 0
    x: Rat = mpq(0)
    mn: int = 0  # coefficient of n in the index (for weights like H_{n+k})

    def __post_init__(self):
        object.__setattr__(self, "x", mpq(self.x))
        if self.r < 1:
            raise WeightError("harmonic power must be >= 1")
        if self.m < 1:
            raise WeightError("harmonic index must move with k (m >= 1)")

    def index_at(self, n: int, k: int) -> int:
        return self.m * k + self.mn * n + self.s

    def render(self) -> str:
        arg_parts = []
        if self.mn:
            arg_parts.append("n" if self.mn == 1 else f"{self.mn}*n")
        arg_parts.append("k" if self.m == 1 else f"{self.m}*k")
        arg = "+".join(arg_parts)
        if self.s:
            arg += f"{self.s:+d}"
        if self.x:
            return f"Hx({arg}; {self.x})" if self.r == 1 else f"Hx^({self.r})({arg}; {self.x})"
        if self.r == 1:
            return f"H({arg})"
        return f"H^({self.r})({arg})"


_HARMONIC_CACHE: dict = {}


def harmonic_number(idx: int, r: int = 1, x: Rat = mpq(0)) -> Rat:
    """H^{(r)}_idx(x) = sum_{j=1..idx} 1/(j+x)^r; zero for idx <= 0."""
    if idx <= 0:
        return mpq(0)
    x = mpq(x)
    key = (r, x)
    cache = _HARMONIC_CACHE.get(key)
    if cache is None:
        cache = [mpq(0)]
        _HARMONIC_CACHE[key] = cache
    while len(cache) <= idx:
        j = len(cache)
        d = j + x
        if not d:
            raise WeightError(f"harmonic pole: index term j={j} with shift x={x}")
        cache.append(cache[-1] + mpq(1) / d ** r)
    return cache[idx]


def harmonic_eval(atom: HarmonicAtom, n: int, k: int) -> Rat:
    """Exact value of the atom at integers (n, k)."""
    return harmonic_number(atom.index_at(n, k), atom.r, atom.x)


@dataclass(frozen=True)
class WeightExpr:
    """Formal sum of (atom multiset, coefficient) monomials."""

    monomials: tuple = ()  # ((atoms: tuple[HarmonicAtom], coeff: RatFunc), ...)

    @staticmethod
    def one() -> "WeightExpr":
        return WeightExpr((((), RF2_ONE),))

    @staticmethod
    def from_atoms(*atoms: HarmonicAtom) -> "WeightExpr":
        return WeightExpr(((tuple(sorted(atoms, key=_atom_key)), RF2_ONE),))

    @staticmethod
    def monomial(atoms, coeff: RatFunc) -> "WeightExpr":
        return WeightExpr(((tuple(sorted(atoms, key=_atom_key)), coeff),))

    def __add__(self, other: "WeightExpr") -> "WeightExpr":
        return WeightExpr(self.monomials + other.monomials).collect()

    def scale(self, coeff: RatFunc) -> "WeightExpr":
        return WeightExpr(
            tuple((atoms, c * coeff) for atoms, c in self.monomials)
        )

    def collect(self) -> "WeightExpr":
        acc: dict = {}
        order: list = []
        for atoms, c in self.monomials:
            if atoms not in acc:
                acc[atoms] = c
                order.append(atoms)
            else:
                acc[atoms] = acc[atoms] + c
        out = tuple((a, acc[a]) for a in order if acc[a])
        return WeightExpr(out)

    def degree(self) -> int:
        """Maximal harmonic degree over the monomials; -1 for the empty sum."""
        if not self.monomials:
            return -1
        return max(len(atoms) for atoms, _ in self.monomials)

    def is_one(self) -> bool:
        return self.monomials == (((), RF2_ONE),)

    def eval(self, n: int, k: int) -> Rat:
        total = mpq(0)
        for atoms, coeff in self.monomials:
            v = rf2_eval(coeff, n, k)
            for atom in atoms:
                if not v:
                    break
                v *= harmonic_eval(atom, n, k)
            total += v
        return total

    def render(self) -> str:
        if not self.monomials:
            return "0"
        parts = []
        for atoms, coeff in self.monomials:
            fs = [a.render() for a in atoms]
            if coeff != RF2_ONE or not fs:
                fs.insert(0, f"rat({_render_rf2(coeff)})")
            parts.append(" * ".join(fs))
        return " + ".join(parts)


def _atom_key(a: HarmonicAtom):
    return (a.r, a.m, a.mn, a.s, str(a.x))


def atom_delta_pieces(atom: HarmonicAtom) -> list[RatFunc]:
    """The increment of the atom from k to k+1 as simple fractions:

        H at (k+1) - H at k = sum_{i=1..m} 1 / (m*k + mn*n + s + i + x)^r

    returned one fraction per i, each a rational function of k over QQ(n).
    """
    pieces = []
    for i in range(1, atom.m + 1):
        c0 = RatFunc.from_poly(
            UniPoly(QQ, (mpq(atom.s + i) + atom.x, mpq(atom.mn)))
        )
        lin = UniPoly(QN, (c0, QN.of(atom.m)))
        pieces.append(RatFunc(UniPoly.one(QN), lin ** atom.r))
    return pieces


def delta_weight(atoms) -> WeightExpr:
    """Forward difference of a pure atom product, by the subset formula:

        Delta(prod a_j) = sum over nonempty subsets S of
                          prod_{j in S} delta_j(k) * prod_{j not in S} a_j(k)

    Every output monomial has strictly smaller harmonic degree.  Each
    delta_j is expanded into its simple fractions, so the output matches
    the per-denominator decomposition used for the residual sums.
    """
    atoms = tuple(atoms)
    out: list = []
    nsub = 1 << len(atoms)
    for mask in range(1, nsub):
        remaining = []
        piece_lists = []
        for j, atom in enumerate(atoms):
            if mask & (1 << j):
                piece_lists.append(atom_delta_pieces(atom))
            else:
                remaining.append(atom)
        coeffs = [RF2_ONE]
        for pl in piece_lists:
            coeffs = [c * p for c in coeffs for p in pl]
        for c in coeffs:
            out.append((tuple(sorted(remaining, key=_atom_key)), c))
    # Merge exact duplicates (e.g. the two H_k/(k+1) pieces of Delta(H_k^2))
    # but keep distinct simple fractions separate: the per-denominator split
    # is what later yields first-order recurrences for the residual sums.
    merged: dict = {}
    order: list = []
    for atoms_c in out:
        if atoms_c not in merged:
            merged[atoms_c] = 0
            order.append(atoms_c)
        merged[atoms_c] += 1
    final = []
    for atoms, c in order:
        count = merged[(atoms, c)]
        final.append((atoms, c if count == 1 else c.scale(QN.of(count))))
    return WeightExpr(tuple(final))


def _render_rf2(r: RatFunc) -> str:
    from .dsl import render_ratfunc

    return render_ratfunc(r)
