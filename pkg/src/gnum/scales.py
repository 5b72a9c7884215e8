"""Exact scale arithmetic for asymptotic decisions.

A *monomial* is c * exp(-k/eps) * eps**q * prod(atom_i ** p_i) with k, q
and the atom powers exact rationals and c a double (real or complex).
Atoms are net subtrees the polynomial algebra treats as opaque symbols
(oscillators, abs-values of non-simplifiable sums, bump trains, ...).

As eps -> 0 the pure scale part exp(-k/eps) * eps**q is totally ordered:
the term with lexicographically smaller (k, q) dominates.  Polynomials
(finite monomial sums) and quotients of them form the fragment on which
the decision procedures in ``asymptotics`` are exact; everything else is
handled by the envelope bounds in ``profiles``.

Exponents stay exact so decisions never depend on floating noise;
coefficients are doubles and near-total cancellations are chopped at
relative 1e-12, mirroring the evaluator's own rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from . import nets
from .nets import NetExpr

F0 = Fraction(0)
CHOP = 1e-12

Atoms = Tuple[Tuple[NetExpr, Fraction], ...]
Mono = Tuple[Fraction, Fraction, Atoms]

MONO_ONE: Mono = (F0, F0, ())


def _atom_key(a: NetExpr) -> str:
    return repr(a)


def atoms_from(pairs: Iterable[Tuple[NetExpr, Fraction]]) -> Atoms:
    merged: Dict[NetExpr, Fraction] = {}
    for a, p in pairs:
        merged[a] = merged.get(a, F0) + p
    # |a|^(2k) = a^(2k) for real a: canonicalize to the bare atom
    for a in list(merged):
        p = merged[a]
        if isinstance(a, nets.AbsNode) and p.denominator == 1 \
                and p.numerator % 2 == 0 and nets.is_real_net(a.x):
            del merged[a]
            merged[a.x] = merged.get(a.x, F0) + p
    items = [(a, p) for a, p in merged.items() if p != 0]
    items.sort(key=lambda ap: _atom_key(ap[0]))
    return tuple(items)


def mono_mul(m1: Mono, m2: Mono) -> Mono:
    return (m1[0] + m2[0], m1[1] + m2[1], atoms_from(m1[2] + m2[2]))


def mono_pow(m: Mono, r: Fraction) -> Mono:
    return (m[0] * r, m[1] * r, atoms_from((a, p * r) for a, p in m[2]))


def mono_div(m1: Mono, m2: Mono) -> Mono:
    return mono_mul(m1, mono_pow(m2, Fraction(-1)))


def scale_key(m: Mono) -> Tuple[Fraction, Fraction]:
    """Dominance key: lexicographically smaller (k, q) dominates as eps->0."""
    return (m[0], m[1])


def mono_sort_key(m: Mono):
    return (m[0], m[1], tuple((_atom_key(a), p) for a, p in m[2]))


class Poly:
    """Finite monomial sum with chop-on-cancel coefficient arithmetic."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Mono, complex]] = None):
        self.terms: Dict[Mono, complex] = terms or {}

    # -- builders ---------------------------------------------------------

    @staticmethod
    def zero() -> "Poly":
        return Poly({})

    @staticmethod
    def const(c) -> "Poly":
        if c == 0:
            return Poly.zero()
        return Poly({MONO_ONE: c})

    @staticmethod
    def scale_mono(k: Fraction, q: Fraction, c=1.0) -> "Poly":
        return Poly({(k, q, ()): c})

    @staticmethod
    def atom(a: NetExpr, power: Fraction = Fraction(1), c=1.0) -> "Poly":
        return Poly({(F0, F0, atoms_from([(a, power)])): c})

    # -- arithmetic -------------------------------------------------------

    def add(self, other: "Poly") -> "Poly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            if m in out:
                a = out[m]
                s = a + c
                if abs(s) <= CHOP * max(abs(a), abs(c)):
                    del out[m]
                else:
                    out[m] = s
            else:
                out[m] = c
        return Poly(out)

    def neg(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def sub(self, other: "Poly") -> "Poly":
        return self.add(other.neg())

    def scale(self, c) -> "Poly":
        if c == 0:
            return Poly.zero()
        return Poly({m: v * c for m, v in self.terms.items()})

    def mul(self, other: "Poly") -> "Poly":
        acc: Dict[Mono, complex] = {}
        peak: Dict[Mono, float] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                c = c1 * c2
                acc[m] = acc.get(m, 0.0) + c
                peak[m] = max(peak.get(m, 0.0), abs(c))
        out = {m: c for m, c in acc.items()
               if abs(c) > CHOP * peak[m]}
        return Poly(out)

    def pow_int(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("pow_int needs n >= 0")
        out = Poly.const(1.0)
        base = self
        while n:
            if n & 1:
                out = out.mul(base)
            base = base.mul(base)
            n >>= 1
        return out

    # -- structure --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self) -> List[Tuple[Mono, complex]]:
        return sorted(self.terms.items(), key=lambda mc: mono_sort_key(mc[0]))

    def grouped_by_scale(self) -> List[Tuple[Tuple[Fraction, Fraction],
                                             List[Tuple[Atoms, complex]]]]:
        """Terms grouped by pure scale (k, q), most dominant group first."""
        groups: Dict[Tuple[Fraction, Fraction], List[Tuple[Atoms, complex]]] = {}
        for m, c in self.sorted_terms():
            groups.setdefault(scale_key(m), []).append((m[2], c))
        return sorted(groups.items(), key=lambda g: g[0])

    def single_term(self) -> Optional[Tuple[Mono, complex]]:
        if len(self.terms) == 1:
            return next(iter(self.terms.items()))
        return None

    def gcd_mono(self) -> Mono:
        """Componentwise-min monomial dividing every term."""
        if not self.terms:
            return MONO_ONE
        ms = list(self.terms)
        k = min(m[0] for m in ms)
        q = min(m[1] for m in ms)
        common: Dict[NetExpr, Fraction] = dict(ms[0][2])
        for m in ms[1:]:
            d = dict(m[2])
            for a in list(common):
                p = min(common[a], d.get(a, F0))
                if p > 0:
                    common[a] = p
                else:
                    del common[a]
        return (k, q, atoms_from(common.items()))

    def divide_mono(self, m: Mono) -> "Poly":
        inv = mono_pow(m, Fraction(-1))
        return Poly({mono_mul(t, inv): c for t, c in self.terms.items()})

    def all_atoms(self):
        out = []
        for m in self.terms:
            for a, _ in m[2]:
                out.append(a)
        return out

    def is_real(self) -> bool:
        return all(not isinstance(c, complex) or c.imag == 0.0
                   for c in self.terms.values())

    def __repr__(self):
        if not self.terms:
            return "Poly(0)"
        bits = []
        for (k, q, atoms), c in self.sorted_terms():
            s = f"{c!r}"
            if k:
                s += f"*E^{k}"
            if q:
                s += f"*eps^{q}"
            for a, p in atoms:
                s += f"*[{type(a).__name__}]^{p}"
            bits.append(s)
        return "Poly(" + " + ".join(bits) + ")"


def canonical_net(p: Poly) -> NetExpr:
    """Deterministic tree rebuild of a polynomial (for canonical atoms)."""
    if p.is_zero():
        return nets.ZERO
    parts = []
    for (k, q, atoms), c in p.sorted_terms():
        factors: List[NetExpr] = []
        if c != 1.0 or (not atoms and k == 0 and q == 0):
            factors.append(nets.Const(c))
        if k != 0:
            factors.append(nets.PowQ(nets.ExpNegRecip(), k) if k != 1
                           else nets.ExpNegRecip())
        if q != 0:
            factors.append(nets.PowQ(nets.EPS, q) if q != 1 else nets.EPS)
        for a, pw in atoms:
            factors.append(a if pw == 1 else nets.PowQ(a, pw))
        term = factors[0]
        for f in factors[1:]:
            term = nets.Mul(term, f)
        parts.append(term)
    out = parts[0]
    for t in parts[1:]:
        out = nets.Add(out, t)
    return out


@dataclass
class RatForm:
    """num/den with den from a structurally nowhere-zero net (den != 0
    pointwise); den == Poly.const(1) on the purely polynomial fragment."""

    num: Poly
    den: Poly

    @staticmethod
    def from_poly(p: Poly) -> "RatForm":
        return RatForm(p, Poly.const(1.0))

    def is_poly(self) -> bool:
        st = self.den.single_term()
        return st is not None and st[0] == MONO_ONE

    def simplify(self) -> "RatForm":
        if self.num.is_zero():
            return RatForm(Poly.zero(), Poly.const(1.0))
        st = self.den.single_term()
        if st is not None:
            m, c = st
            num = self.num.divide_mono(m).scale(1.0 / c)
            return RatForm(num, Poly.const(1.0))
        g1 = self.num.gcd_mono()
        g2 = self.den.gcd_mono()
        g = (min(g1[0], g2[0]), min(g1[1], g2[1]),
             atoms_from({a: min(dict(g1[2]).get(a, F0), dict(g2[2]).get(a, F0))
                         for a in set(dict(g1[2])) & set(dict(g2[2]))}.items()))
        if g != MONO_ONE:
            return RatForm(self.num.divide_mono(g), self.den.divide_mono(g))
        return self

    def add(self, o: "RatForm") -> "RatForm":
        if self.is_poly() and o.is_poly():
            return RatForm(self.num.add(o.num), Poly.const(1.0))
        return RatForm(self.num.mul(o.den).add(o.num.mul(self.den)),
                       self.den.mul(o.den)).simplify()

    def neg(self) -> "RatForm":
        return RatForm(self.num.neg(), self.den)

    def mul(self, o: "RatForm") -> "RatForm":
        return RatForm(self.num.mul(o.num), self.den.mul(o.den)).simplify()

    def inv(self) -> "RatForm":
        return RatForm(self.den, self.num).simplify()

    def pow_int(self, n: int) -> "RatForm":
        if n >= 0:
            return RatForm(self.num.pow_int(n), self.den.pow_int(n)).simplify()
        return self.inv().pow_int(-n)

    def scale(self, c) -> "RatForm":
        return RatForm(self.num.scale(c), self.den)
