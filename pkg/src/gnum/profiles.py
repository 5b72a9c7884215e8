"""Compositional asymptotic analysis of net expression trees.

Two cooperating layers:

* an exact normal form (``scales.RatForm``) over monomials
  exp(-k/eps) * eps**q * atoms, with min/max/abs rewritten through the
  lattice identities min = (a+b-|a-b|)/2, max = (a+b+|a-b|)/2 and
  |a*b| = |a|*|b|, so that ring/lattice identities cancel exactly;

* envelope data (``Info``): eventual upper/lower bounds in the scale
  group, exact smallness/largeness along computable sequences, and a
  pointwise interval on (0,1].

Everything here is *sound*: a bound is only reported when the structure
certifies it; the decision procedures turn missing information into
``Unknown``, never into a guess.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Tuple

from . import nets
from .nets import (AbsFactor, AbsNode, Add, AnnihilatorTransition, Blend,
                   BumpTrain, Const, ConstHeights, CosRecipPow, DecayHeights,
                   Eps, ExpNegRecip, ExplicitHeights, GelfandFactor, Indicator,
                   Inv, MaxNode, MinNode, Mul, Neg, NetExpr, PowQ,
                   RegularizedQuotient, RootN, SinRecipPow, SmoothBlend,
                   SpikeTrain, is_real_net, nonneg_net)
from .scales import (MONO_ONE, Poly, RatForm, atoms_from, canonical_net,
                     scale_key)
from .sequences import (Geometric, Harmonic, HarmonicMidpoints, Midpoints,
                        PiSequence, SequenceRule)

F = Fraction

# --------------------------------------------------------------------------
# envelopes in the scale group
# --------------------------------------------------------------------------

ZERO_K = "zero"          # |x| = 0 eventually
SUPERPOW = "superpow"    # |x| below every power eventually
POW = "pow"              # |x| ~ c * eps**q side
SUPERGROW = "supergrow"  # |x| above every power eventually


@dataclass(frozen=True)
class Env:
    kind: str
    q: Fraction = F(0)
    c: float = 1.0


def env_from_scale(k: Fraction, q: Fraction, c: float) -> Env:
    if k > 0:
        return Env(SUPERPOW)
    if k < 0:
        return Env(SUPERGROW)
    return Env(POW, q, c)


def upper_mul(a: Optional[Env], b: Optional[Env]) -> Optional[Env]:
    if a is None or b is None:
        return None
    if ZERO_K in (a.kind, b.kind):
        return Env(ZERO_K)
    if SUPERPOW in (a.kind, b.kind):
        other = b if a.kind == SUPERPOW else a
        if other.kind == SUPERGROW:
            return None
        return Env(SUPERPOW)
    if SUPERGROW in (a.kind, b.kind):
        return None
    return Env(POW, a.q + b.q, a.c * b.c)


def upper_add(a: Optional[Env], b: Optional[Env]) -> Optional[Env]:
    if a is None or b is None:
        return None
    if a.kind == ZERO_K:
        return b
    if b.kind == ZERO_K:
        return a
    if a.kind == SUPERPOW and b.kind == SUPERPOW:
        return Env(SUPERPOW, c=a.c + b.c)
    if a.kind == SUPERPOW:
        return b
    if b.kind == SUPERPOW:
        return a
    if SUPERGROW in (a.kind, b.kind):
        return None
    # c1*eps^q1 + c2*eps^q2 <= (c1+c2)*eps^min(q) for eps <= 1
    return Env(POW, min(a.q, b.q), a.c + b.c)


def upper_pow(a: Optional[Env], r: Fraction) -> Optional[Env]:
    """|x|**r bound from |x| bound; r > 0."""
    if a is None or r <= 0:
        return None
    if a.kind in (ZERO_K, SUPERPOW, SUPERGROW):
        return a
    return Env(POW, a.q * r, a.c ** float(r))


def lower_pow(a: Optional[Env], r: Fraction) -> Optional[Env]:
    if a is None or r <= 0:
        return None
    if a.kind == SUPERGROW:
        return a
    if a.kind == POW:
        return Env(POW, a.q * r, a.c ** float(r))
    return None


def lower_mul(a: Optional[Env], b: Optional[Env]) -> Optional[Env]:
    if a is None or b is None:
        return None
    if SUPERGROW in (a.kind, b.kind):
        other = b if a.kind == SUPERGROW else a
        return Env(SUPERGROW) if other.kind in (POW, SUPERGROW) else None
    return Env(POW, a.q + b.q, a.c * b.c)


def lower_vs_upper(lo: Optional[Env], up: Optional[Env]) -> Optional[Env]:
    """Lower bound surviving an additive perturbation bounded by ``up``."""
    if lo is None or up is None:
        return None
    if up.kind == ZERO_K:
        return lo
    if lo.kind == SUPERGROW:
        return lo if up.kind in (SUPERPOW, POW) else None
    if up.kind == SUPERPOW:
        return Env(POW, lo.q, lo.c * 0.5)
    if up.kind == POW:
        if up.q > lo.q:
            return Env(POW, lo.q, lo.c * 0.5)
        if up.q == lo.q and lo.c > up.c:
            return Env(POW, lo.q, lo.c - up.c)
    return None


def env_inv_upper(lo: Optional[Env]) -> Optional[Env]:
    """Upper bound of 1/x from a lower bound of |x|."""
    if lo is None:
        return None
    if lo.kind == SUPERGROW:
        return Env(SUPERPOW)
    if lo.kind == POW:
        return Env(POW, -lo.q, 1.0 / lo.c)
    return None


def env_inv_lower(up: Optional[Env]) -> Optional[Env]:
    if up is None:
        return None
    if up.kind in (ZERO_K, SUPERPOW):
        return Env(SUPERGROW)
    if up.kind == POW:
        return Env(POW, -up.q, 1.0 / up.c)
    return None


# --------------------------------------------------------------------------
# interval envelope (pointwise on (0,1], extended reals)
# --------------------------------------------------------------------------

INF = math.inf
FULL = (-INF, INF)


def _imul(a, b):
    prods = []
    for x in a:
        for y in b:
            if (x == 0 and abs(y) == INF) or (y == 0 and abs(x) == INF):
                prods.append(0.0)
            else:
                prods.append(x * y)
    return (min(prods), max(prods))


def _ipow(iv, q: float):
    lo, hi = iv
    if lo < 0:
        return FULL
    if q >= 0:
        return (lo ** q if lo > 0 else 0.0, hi ** q if hi < INF else INF)
    lo2 = hi ** q if hi not in (0.0, INF) else (0.0 if hi == INF else INF)
    hi2 = lo ** q if lo > 0 else INF
    return (lo2, hi2)


# --------------------------------------------------------------------------
# along-a-sequence info
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class AlongSeq:
    seq: SequenceRule
    env: Env


# --------------------------------------------------------------------------
# node envelope info
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Info:
    real: bool = True
    nonneg: bool = False
    upper: Optional[Env] = None       # |x| <= c*scale eventually
    lower: Optional[Env] = None       # |x| >= c*scale eventually
    lower_seq: Optional[AlongSeq] = None   # |x(eps_j)| >= env along seq
    small_seq: Optional[AlongSeq] = None   # |x(eps_j)| <= env along seq
    ivl: Tuple[float, float] = FULL   # pointwise range on (0,1]


def _seq_small_mul(a: Optional[AlongSeq], other_up: Optional[Env]):
    if a is None or other_up is None or other_up.kind == SUPERGROW:
        return None
    if a.env.kind == ZERO_K:
        return a
    return AlongSeq(a.seq, Env(SUPERPOW))


@lru_cache(maxsize=None)
def info(net: NetExpr) -> Info:
    return _info(net)


def _info(net: NetExpr) -> Info:
    if isinstance(net, Const):
        if isinstance(net.c, complex):
            m = abs(net.c)
            return Info(real=False, upper=Env(POW, F(0), m),
                        lower=Env(POW, F(0), m))
        c = float(net.c)
        if c == 0.0:
            return Info(nonneg=True, upper=Env(ZERO_K),
                        small_seq=AlongSeq(Harmonic(), Env(ZERO_K)),
                        ivl=(0.0, 0.0))
        return Info(nonneg=c > 0, upper=Env(POW, F(0), abs(c)),
                    lower=Env(POW, F(0), abs(c)), ivl=(c, c))
    if isinstance(net, Eps):
        return Info(nonneg=True, upper=Env(POW, F(1), 1.0),
                    lower=Env(POW, F(1), 1.0), ivl=(0.0, 1.0))
    if isinstance(net, ExpNegRecip):
        # geometric points: e**(-2**j) falls below (2**-j)**j, so the
        # sequence witnesses the paper's |r(eps_j)| < eps_j**j bound
        return Info(nonneg=True, upper=Env(SUPERPOW),
                    small_seq=AlongSeq(Geometric(F(1, 2)), Env(SUPERPOW)),
                    ivl=(0.0, math.exp(-1.0)))
    if isinstance(net, SinRecipPow):
        return Info(upper=Env(POW, F(0), 1.0),
                    lower_seq=AlongSeq(PiSequence(F(2), F(1, 2), net.p),
                                       Env(POW, F(0), 1.0)),
                    small_seq=AlongSeq(PiSequence(F(1), F(0), net.p),
                                       Env(ZERO_K)),
                    ivl=(-1.0, 1.0))
    if isinstance(net, CosRecipPow):
        return Info(upper=Env(POW, F(0), 1.0),
                    lower_seq=AlongSeq(PiSequence(F(2), F(0), net.p),
                                       Env(POW, F(0), 1.0)),
                    small_seq=AlongSeq(PiSequence(F(1), F(1, 2), net.p),
                                       Env(ZERO_K)),
                    ivl=(-1.0, 1.0))
    if isinstance(net, Neg):
        i = info(net.x)
        return replace(i, nonneg=False, ivl=(-i.ivl[1], -i.ivl[0]))
    if isinstance(net, AbsNode):
        i = info(net.x)
        lo, hi = i.ivl
        alo = 0.0 if lo < 0 < hi else min(abs(lo), abs(hi))
        return replace(i, real=True, nonneg=True,
                       ivl=(alo, max(abs(lo), abs(hi))))
    if isinstance(net, Add):
        return _info_add(net)
    if isinstance(net, Mul):
        return _info_mul(net)
    if isinstance(net, Inv):
        i = info(net.x)
        lo, hi = i.ivl
        if lo > 0:
            ivl = (1.0 / hi if hi < INF else 0.0, 1.0 / lo)
        elif hi < 0:
            ivl = (1.0 / hi, 1.0 / lo if lo > -INF else 0.0)
        else:
            ivl = FULL
        return Info(real=i.real, nonneg=lo > 0,
                    upper=env_inv_upper(i.lower),
                    lower=env_inv_lower(i.upper),
                    lower_seq=(AlongSeq(i.small_seq.seq, Env(SUPERGROW))
                               if i.small_seq is not None else None),
                    small_seq=(AlongSeq(i.lower_seq.seq, Env(SUPERPOW))
                               if i.lower_seq is not None
                               and i.lower_seq.env.kind == SUPERGROW else None),
                    ivl=ivl)
    if isinstance(net, PowQ):
        i = info(net.base)
        q = net.q
        if q > 0:
            up, lo = upper_pow(i.upper, q), lower_pow(i.lower, q)
            lseq = (AlongSeq(i.lower_seq.seq, lower_pow(i.lower_seq.env, q))
                    if i.lower_seq and lower_pow(i.lower_seq.env, q) else None)
            sseq = (AlongSeq(i.small_seq.seq, i.small_seq.env)
                    if i.small_seq else None)
        else:
            up, lo = env_inv_upper(lower_pow(i.lower, -q)), \
                     env_inv_lower(upper_pow(i.upper, -q))
            lseq, sseq = None, None
        return Info(real=i.real, nonneg=i.nonneg or (q.denominator == 1 and
                                                     q.numerator % 2 == 0 and i.real),
                    upper=up, lower=lo, lower_seq=lseq, small_seq=sseq,
                    ivl=_ipow(i.ivl, float(q)) if i.real else FULL)
    if isinstance(net, RootN):
        i = info(net.x)
        r = F(1, net.n)
        return Info(nonneg=True, upper=upper_pow(i.upper, r),
                    lower=lower_pow(i.lower, r),
                    lower_seq=(AlongSeq(i.lower_seq.seq,
                                        lower_pow(i.lower_seq.env, r))
                               if i.lower_seq and lower_pow(i.lower_seq.env, r)
                               else None),
                    small_seq=i.small_seq,
                    ivl=_ipow(i.ivl, 1.0 / net.n))
    if isinstance(net, (MinNode, MaxNode)):
        a, b = info(net.l), info(net.r)
        lo = (min if isinstance(net, MinNode) else max)(a.ivl[0], b.ivl[0])
        hi = (min if isinstance(net, MinNode) else max)(a.ivl[1], b.ivl[1])
        nonneg = (a.nonneg and b.nonneg) if isinstance(net, MinNode) \
            else (a.nonneg or b.nonneg)
        low = None
        if a.nonneg and b.nonneg:
            if isinstance(net, MinNode):
                if a.lower and b.lower:
                    low = a.lower if (a.lower.kind == POW and b.lower.kind == POW
                                      and a.lower.q >= b.lower.q) else b.lower
            else:
                low = a.lower or b.lower
        return Info(nonneg=nonneg, upper=upper_add(a.upper, b.upper),
                    lower=low, ivl=(lo, hi))
    if isinstance(net, BumpTrain):
        return _info_bump(net)
    if isinstance(net, (Indicator, SpikeTrain)):
        return Info(nonneg=True, upper=Env(POW, F(0), 1.0),
                    lower_seq=AlongSeq(net.s, Env(POW, F(0), 1.0)),
                    small_seq=AlongSeq(Midpoints(net.s), Env(ZERO_K)),
                    ivl=(0.0, 1.0))
    if isinstance(net, Blend):
        parts = [info(p) for p in net.pieces] + [info(net.tail)]
        up = Env(ZERO_K)
        for p in parts:
            up = upper_add(up, p.upper)
        return Info(real=all(p.real for p in parts),
                    nonneg=all(p.nonneg for p in parts),
                    upper=up,
                    ivl=(min(p.ivl[0] for p in parts),
                         max(p.ivl[1] for p in parts)))
    if isinstance(net, GelfandFactor):
        a = info(net.a)
        up = Env(ZERO_K) if (a.upper is not None and a.upper.kind in
                             (ZERO_K, SUPERPOW) or
                             (a.upper is not None and a.upper.kind == POW
                              and a.upper.q > 0)) else Env(POW, F(0), 4.0)
        return Info(real=a.real, upper=up,
                    ivl=(-4.0, 4.0) if a.real else FULL)
    if isinstance(net, RegularizedQuotient):
        ni, di = info(net.num), info(net.den)
        if net.dom_bound is not None:
            up = Env(POW, F(0), float(net.dom_bound))
        else:
            up = upper_mul(ni.upper, env_inv_upper(di.lower))
        return Info(real=ni.real and di.real, upper=up)
    if isinstance(net, AnnihilatorTransition):
        return Info(nonneg=True, upper=Env(POW, F(0), 1.0), ivl=(0.0, 1.0))
    if isinstance(net, AbsFactor):
        i = info(net.x)
        return Info(real=i.real, upper=Env(POW, F(0), 2.0),
                    ivl=(-2.0, 2.0) if i.real else FULL)
    if isinstance(net, SmoothBlend):
        i = info(net.source)
        pad = info(net.bound).ivl[1]
        pad = 1.0 if not math.isfinite(pad) else pad
        return Info(real=i.real, nonneg=False,
                    upper=upper_add(i.upper, Env(SUPERPOW)),
                    lower=lower_vs_upper(i.lower, Env(SUPERPOW)),
                    lower_seq=(AlongSeq(i.lower_seq.seq,
                                        lower_vs_upper(i.lower_seq.env,
                                                       Env(SUPERPOW)))
                               if i.lower_seq and
                               lower_vs_upper(i.lower_seq.env, Env(SUPERPOW))
                               else None),
                    small_seq=(AlongSeq(i.small_seq.seq, Env(SUPERPOW))
                               if i.small_seq else None),
                    ivl=(i.ivl[0] - pad, i.ivl[1] + pad))
    raise TypeError(f"no info rule for {type(net).__name__}")


def _info_add(net: Add) -> Info:
    a, b = info(net.l), info(net.r)
    up = upper_add(a.upper, b.upper)
    lo = lower_vs_upper(a.lower, b.upper) or lower_vs_upper(b.lower, a.upper)
    lseq = None
    if a.lower_seq is not None:
        e = lower_vs_upper(a.lower_seq.env, b.upper)
        if e is not None:
            lseq = AlongSeq(a.lower_seq.seq, e)
    if lseq is None and b.lower_seq is not None:
        e = lower_vs_upper(b.lower_seq.env, a.upper)
        if e is not None:
            lseq = AlongSeq(b.lower_seq.seq, e)
    sseq = None
    if a.small_seq is not None and b.upper is not None and \
            b.upper.kind in (ZERO_K, SUPERPOW):
        sseq = AlongSeq(a.small_seq.seq,
                        Env(ZERO_K) if (a.small_seq.env.kind == ZERO_K and
                                        b.upper.kind == ZERO_K) else Env(SUPERPOW))
    elif b.small_seq is not None and a.upper is not None and \
            a.upper.kind in (ZERO_K, SUPERPOW):
        sseq = AlongSeq(b.small_seq.seq,
                        Env(ZERO_K) if (b.small_seq.env.kind == ZERO_K and
                                        a.upper.kind == ZERO_K) else Env(SUPERPOW))
    return Info(real=a.real and b.real, nonneg=a.nonneg and b.nonneg,
                upper=up, lower=lo, lower_seq=lseq, small_seq=sseq,
                ivl=(a.ivl[0] + b.ivl[0], a.ivl[1] + b.ivl[1]))


def _trains_disjoint(x: BumpTrain, y: BumpTrain, n: int = 200) -> bool:
    """Numeric check that the first n supports of two trains are pairwise
    disjoint (used to certify exact-zero products of interleaved trains)."""
    def supports(t):
        out = []
        for j in range(1, n + 1):
            c = t.schedule.value(j)
            w = t.widths.value(t.schedule, j)
            out.append((c - w, c + w))
        return out
    sx, sy = supports(x), supports(y)
    for (a1, b1) in sx:
        for (a2, b2) in sy:
            if a1 < b2 and a2 < b1:
                return False
    return True


def _info_mul(net: Mul) -> Info:
    a, b = info(net.l), info(net.r)
    same = net.l == net.r
    up = upper_mul(a.upper, b.upper)
    # certified smallness of a reference net on a train's supports
    for t, o in ((net.l, net.r), (net.r, net.l)):
        if isinstance(t, BumpTrain) and t.small_cert is not None:
            cert = t.small_cert
            if (o == cert.ref or o == AbsNode(cert.ref)) and cert.tail_sound:
                up = Env(SUPERPOW)
    if isinstance(net.l, BumpTrain) and isinstance(net.r, BumpTrain):
        if _trains_disjoint(net.l, net.r):
            up = Env(ZERO_K)
    lo = lower_mul(a.lower, b.lower)
    lseq = None
    if same and a.lower_seq is not None:
        e = lower_mul(a.lower_seq.env, a.lower_seq.env)
        if e is not None:
            lseq = AlongSeq(a.lower_seq.seq, e)
    elif a.lower_seq is not None and b.lower is not None:
        e = lower_mul(a.lower_seq.env, b.lower)
        if e is not None:
            lseq = AlongSeq(a.lower_seq.seq, e)
    elif b.lower_seq is not None and a.lower is not None:
        e = lower_mul(b.lower_seq.env, a.lower)
        if e is not None:
            lseq = AlongSeq(b.lower_seq.seq, e)
    sseq = _seq_small_mul(a.small_seq, b.upper) or \
        _seq_small_mul(b.small_seq, a.upper)
    return Info(real=a.real and b.real,
                nonneg=(a.nonneg and b.nonneg) or (same and a.real),
                upper=up, lower=lo, lower_seq=lseq, small_seq=sseq,
                ivl=_imul(a.ivl, b.ivl) if (a.real and b.real) else FULL)


def _heights_env(rule, schedule) -> Tuple[Optional[Env], Optional[Env], float]:
    """(upper env, center-value lower env, sup) for a height rule."""
    if isinstance(rule, ConstHeights):
        c = abs(rule.c)
        if c == 0.0:
            return Env(ZERO_K), None, 0.0
        return Env(POW, F(0), c), Env(POW, F(0), c), c
    if isinstance(rule, DecayHeights):
        if rule.slope > 0:
            sup = max(abs(rule.value(schedule, j)) for j in range(1, 65))
            return Env(SUPERPOW), None, sup
        if rule.slope == 0:
            vals = [abs(rule.value(schedule, j)) /
                    schedule.value(j) ** float(rule.offset)
                    for j in range(1, 65)]
            c = max(vals) * 2.0
            return Env(POW, rule.offset, c), Env(POW, rule.offset,
                                                 min(vals) * 0.9), \
                max(abs(rule.value(schedule, j)) for j in range(1, 65)) * 1.05
        return None, Env(SUPERGROW), INF
    if isinstance(rule, ExplicitHeights):
        up, lo, sup = _heights_env(rule.tail, schedule)
        sup = max([sup] + [abs(v) for v in rule.values])
        if up is not None and up.kind == POW:
            up = Env(POW, up.q, max(up.c, sup * 2.0))
        return up, lo, sup
    return None, None, INF


def _info_bump(net: BumpTrain) -> Info:
    up, center_lo, sup = _heights_env(net.heights, net.schedule)
    lseq = AlongSeq(net.schedule, center_lo) if center_lo is not None else None
    return Info(nonneg=nets._heights_nonneg(net.heights),
                upper=up,
                lower_seq=lseq,
                small_seq=AlongSeq(Midpoints(net.schedule), Env(ZERO_K)),
                ivl=(0.0, sup) if nets._heights_nonneg(net.heights)
                else (-sup, sup))


# --------------------------------------------------------------------------
# exact normal form with lattice/abs rewriting
# --------------------------------------------------------------------------

def _pythagoras(p: Poly) -> Poly:
    """sin(1/eps^p)^2 + cos(1/eps^p)^2 -> 1 inside the normal form."""
    terms = dict(p.terms)
    changed = True
    while changed:
        changed = False
        for mono, c in list(terms.items()):
            if mono not in terms:
                continue
            k, q, atoms = mono
            for idx, (a, pw) in enumerate(atoms):
                if not isinstance(a, SinRecipPow) or pw != 2:
                    continue
                partner_atoms = list(atoms)
                partner_atoms[idx] = (CosRecipPow(a.p), Fraction(2))
                partner = (k, q, atoms_from(partner_atoms))
                if partner not in terms:
                    continue
                c2 = terms[partner]
                common = c if abs(c) <= abs(c2) else c2
                rest_atoms = atoms_from(atoms[:idx] + atoms[idx + 1:])
                reduced = (k, q, rest_atoms)
                del terms[mono]
                if abs(c2 - common) > CHOP_ABS * max(1.0, abs(c2)):
                    terms[partner] = c2 - common
                else:
                    del terms[partner]
                if abs(c - common) > CHOP_ABS * max(1.0, abs(c)):
                    terms[mono] = c - common
                terms[reduced] = terms.get(reduced, 0.0) + common
                if terms[reduced] == 0.0:
                    del terms[reduced]
                changed = True
                break
            if changed:
                break
    return Poly(terms)


CHOP_ABS = 1e-12


@lru_cache(maxsize=None)
def rat(net: NetExpr) -> RatForm:
    """Exact normal form; non-fragment subtrees become atoms."""
    r = _rat(net)
    return RatForm(_pythagoras(r.num), _pythagoras(r.den))


def _rat(net: NetExpr) -> RatForm:
    if isinstance(net, Const):
        return RatForm.from_poly(Poly.const(net.c))
    if isinstance(net, Eps):
        return RatForm.from_poly(Poly.scale_mono(F(0), F(1)))
    if isinstance(net, ExpNegRecip):
        return RatForm.from_poly(Poly.scale_mono(F(1), F(0)))
    if isinstance(net, Add):
        return rat(net.l).add(rat(net.r))
    if isinstance(net, Neg):
        return rat(net.x).neg()
    if isinstance(net, Mul):
        return rat(net.l).mul(rat(net.r))
    if isinstance(net, Inv):
        return rat(net.x).inv()
    if isinstance(net, PowQ):
        r = rat(net.base)
        q = net.q
        if q.denominator == 1:
            return r.pow_int(q.numerator)
        out = _rat_frac_pow(r, q)
        if out is not None:
            return out
        return RatForm.from_poly(Poly.atom(net))
    if isinstance(net, AbsNode):
        return _rat_abs(net.x)
    if isinstance(net, MinNode):
        d = nets.sub(net.l, net.r)
        half = rat(net.l).add(rat(net.r)).add(_rat_abs(d).neg())
        return half.scale(0.5)
    if isinstance(net, MaxNode):
        d = nets.sub(net.l, net.r)
        half = rat(net.l).add(rat(net.r)).add(_rat_abs(d))
        return half.scale(0.5)
    if isinstance(net, RootN):
        r = rat(net.x)
        out = _rat_frac_pow(r, F(1, net.n))
        if out is not None:
            return out
        return RatForm.from_poly(Poly.atom(net))
    if isinstance(net, SmoothBlend):
        # |SmoothBlend(x) - x| <= exp(-1/eps): identical modulo negligibility
        return rat(net.source)
    return RatForm.from_poly(Poly.atom(net))


def _atom_abs(a: NetExpr, p: Fraction) -> Tuple[NetExpr, Fraction]:
    """|a**p| as an atom power."""
    if nonneg_net(a):
        return (a, p)
    if p.denominator == 1 and p.numerator % 2 == 0 and is_real_net(a):
        return (a, p)
    return (AbsNode(a), p)


def _canonical_abs_atom(p: Poly) -> NetExpr:
    """|P| = |-P|: fix the sign so structurally opposite polynomials map
    to the same atom."""
    from .scales import mono_sort_key
    lead = min(p.terms, key=mono_sort_key)
    c = complex(p.terms[lead])
    if (c.real, c.imag) < (0.0, 0.0):
        p = p.neg()
    return AbsNode(canonical_net(p))


def _abs_poly(p: Poly) -> Optional[Poly]:
    """|P| as a polynomial, or None when only an opaque atom would do."""
    if p.is_zero():
        return p
    if poly_nonneg(p):
        return p
    if poly_nonneg(p.neg()):
        return p.neg()
    # |c1*U + c2*V| = |c1|*U + |c2|*V for disjointly supported trains
    if len(p.terms) == 2:
        (m1, c1), (m2, c2) = p.sorted_terms()

        def solo_train(m):
            return (len(m[2]) == 1 and m[2][0][1] == 1 and
                    isinstance(m[2][0][0], BumpTrain) and
                    nonneg_net(m[2][0][0]))

        if solo_train(m1) and solo_train(m2) and m1[:2] == m2[:2] and \
                not isinstance(c1, complex) and not isinstance(c2, complex) \
                and _trains_disjoint(m1[2][0][0], m2[2][0][0]):
            return Poly({m1: abs(c1), m2: abs(c2)})
    st = p.single_term()
    if st is not None:
        (k, q, atoms), c = st
        new_atoms = [_atom_abs(a, pw) for a, pw in atoms]
        return Poly({(k, q, tuple(sorted(new_atoms,
                                         key=lambda ap: repr(ap[0])))): abs(c)})
    g = p.gcd_mono()
    if g != MONO_ONE:
        rest = p.divide_mono(g)
        if poly_nonneg(rest) or poly_nonneg(rest.neg()) or \
                rest.single_term() is not None:
            rest_abs = _abs_poly(rest)
        else:
            rest_abs = Poly.atom(_canonical_abs_atom(rest))
        if rest_abs is not None:
            gabs = Poly({(g[0], g[1],
                          tuple(sorted((_atom_abs(a, pw) for a, pw in g[2]),
                                       key=lambda ap: repr(ap[0])))): 1.0})
            return gabs.mul(rest_abs)
    return None


@lru_cache(maxsize=None)
def _rat_abs(net: NetExpr) -> RatForm:
    """Normal form of |net| with multiplicative/structural rewrites."""
    if isinstance(net, Neg):
        return _rat_abs(net.x)
    if isinstance(net, AbsNode):
        return _rat_abs(net.x)
    if isinstance(net, Mul):
        return _rat_abs(net.l).mul(_rat_abs(net.r))
    if isinstance(net, Inv):
        return _rat_abs(net.x).inv()
    if isinstance(net, Const):
        return RatForm.from_poly(Poly.const(abs(net.c)))
    if nonneg_net(net):
        return rat(net)
    if isinstance(net, PowQ) and net.q.denominator == 1:
        return _rat_abs(net.base).pow_int(net.q.numerator)
    # |a*t - b*t| -> |a - b| * |t| (structural common factor)
    if isinstance(net, Add):
        l, r = net.l, net.r
        if isinstance(r, Neg) and isinstance(l, Mul) and isinstance(r.x, Mul):
            for aa, bb in ((l.l, l.r), (l.r, l.l)):
                for cc, dd in ((r.x.l, r.x.r), (r.x.r, r.x.l)):
                    if bb == dd:
                        return _rat_abs(nets.sub(aa, cc)).mul(_rat_abs(bb))
        # |u - v| = u + v for nonnegative nets with disjoint supports
        if isinstance(r, Neg) and isinstance(l, BumpTrain) and \
                isinstance(r.x, BumpTrain) and nonneg_net(l) and \
                nonneg_net(r.x) and _trains_disjoint(l, r.x):
            return rat(l).add(rat(r.x))
    r = rat(net)
    num_abs = _abs_poly(r.num)
    den_abs = _abs_poly(r.den)
    if num_abs is None:
        num_abs = Poly.atom(_canonical_abs_atom(r.num))
    if den_abs is None:
        den_abs = Poly.atom(_canonical_abs_atom(r.den))
    return RatForm(num_abs, den_abs).simplify()


def _rat_frac_pow(r: RatForm, q: Fraction) -> Optional[RatForm]:
    """r**q for fractional q >= 0 on a certified-nonnegative operand;
    None when no exact form exists."""
    if q < 0:
        inner = _rat_frac_pow(r.inv(), -q)
        return inner
    def mono_frac(p: Poly) -> Optional[Poly]:
        if p.is_zero():
            return p
        st = p.single_term()
        if st is None:
            return None
        (k, qq, atoms), c = st
        if isinstance(c, complex) or c < 0:
            return None
        fixed = []
        for a, pw in atoms:
            if nonneg_net(a) or isinstance(a, AbsNode):
                fixed.append((a, pw * q))
            elif pw.denominator == 1 and pw.numerator % 2 == 0 \
                    and is_real_net(a):
                # (a**even)**q = |a|**(even*q)
                fixed.append((AbsNode(a), pw * q))
            else:
                return None
        from .scales import atoms_from
        return Poly({(k * q, qq * q, atoms_from(fixed)): c ** float(q)})
    num = mono_frac(r.num)
    den = mono_frac(r.den)
    if num is None or den is None:
        return None
    return RatForm(num, den).simplify()


# -- polynomial sign certificates -------------------------------------------

def _term_nonneg(m, c) -> bool:
    if isinstance(c, complex) or c < 0:
        return False
    return all(nonneg_net(a) or
               (p.denominator == 1 and p.numerator % 2 == 0 and is_real_net(a))
               for a, p in m[2])


def _scale_ivl(k: Fraction, q: Fraction) -> Tuple[float, float]:
    """Pointwise range of exp(-k/eps) * eps**q on (0, 1]."""
    if k < 0:
        return (0.0, INF)
    if k == 0 and q < 0:
        return (1.0, INF)
    lo = 1.0 if (k == 0 and q == 0) else 0.0
    return (lo, math.exp(-float(k)))


def poly_ivl(p: Poly) -> Tuple[float, float]:
    """Pointwise interval bound of the polynomial on (0, 1]."""
    lo = hi = 0.0
    for (k, q, atoms), c in p.terms.items():
        if isinstance(c, complex):
            return FULL
        iv = _imul(_scale_ivl(k, q), _atoms_ivl(atoms))
        iv = _imul(iv, (c, c))
        lo += iv[0]
        hi += iv[1]
        if math.isnan(lo) or math.isnan(hi):
            return FULL
    return (lo, hi)


def poly_nonneg(p: Poly, depth: int = 4) -> bool:
    """Sound pointwise-nonnegativity certificate for a polynomial.

    Handles termwise-nonnegative sums, interval-nonnegative combinations,
    single-scale groups with a nonnegative group minimum, and the pairing
    c*m*|W| + c*m*W >= 0 produced by the lattice expansions."""
    if all(_term_nonneg(m, c) for m, c in p.terms.items()):
        return True
    if poly_ivl(p)[0] >= 0.0:
        return True
    groups = p.grouped_by_scale()
    if len(groups) == 1:
        gm = group_min(groups[0][1])
        if gm is not None and gm >= 0.0:
            return True
    if depth <= 0:
        return False
    for m, c in p.sorted_terms():
        if isinstance(c, complex) or c <= 0:
            continue
        absatoms = [(a, pw) for a, pw in m[2]
                    if isinstance(a, AbsNode) and pw == 1]
        for a, _ in absatoms:
            rest = [(x, pw) for x, pw in m[2] if x is not a]
            if not all(nonneg_net(x) for x, _ in rest):
                continue
            w = rat(a.x)
            if not w.is_poly():
                continue
            carrier = Poly({(m[0], m[1], tuple(rest)): c})
            candidate = p.sub(Poly({m: c})).sub(carrier.mul(w.num))
            if poly_nonneg(candidate, depth - 1):
                return True
            candidate = p.sub(Poly({m: c})).sub(carrier.mul(w.num.neg()))
            if poly_nonneg(candidate, depth - 1):
                return True
    return False


# -- envelope analysis of normal forms --------------------------------------

def _term_upper(m, c) -> Optional[Env]:
    e = env_from_scale(m[0], m[1], abs(c))
    for a, p in m[2]:
        if p > 0:
            e = upper_mul(e, upper_pow(info(a).upper, p))
        else:
            e = upper_mul(e, env_inv_upper(lower_pow(info(a).lower, -p)))
        if e is None:
            return None
    return e


def poly_upper(p: Poly) -> Optional[Env]:
    out = Env(ZERO_K)
    for m, c in p.sorted_terms():
        out = upper_add(out, _term_upper(m, c))
        if out is None:
            return None
    return out


def _atoms_ivl(atoms) -> Tuple[float, float]:
    iv = (1.0, 1.0)
    for a, p in atoms:
        ai = info(a).ivl
        if not is_real_net(a):
            return FULL
        iv = _imul(iv, _ipow(ai, float(p)))
    return iv


def group_min(terms) -> Optional[float]:
    """Pointwise lower bound of sum(c * atoms) over a single scale group.

    Interval arithmetic per term, plus the envelope fact
    c1*|sin(1/eps^p)| + c2*|cos(1/eps^p)| >= min(c1, c2)."""
    total = 0.0
    pair: dict = {}
    for atoms, c in terms:
        if isinstance(c, complex):
            return None
        if len(atoms) == 1 and atoms[0][1] == 1 and c > 0 and \
                isinstance(atoms[0][0], AbsNode) and \
                isinstance(atoms[0][0].x, (SinRecipPow, CosRecipPow)):
            osc = atoms[0][0].x
            key = ("sin" if isinstance(osc, SinRecipPow) else "cos", osc.p)
            pair[key] = pair.get(key, 0.0) + c
            continue
        iv = _atoms_ivl(atoms)
        lo = min(c * iv[0], c * iv[1])
        if not math.isfinite(lo):
            return None
        total += lo
    for p in {p for kind, p in pair}:
        cs = pair.get(("sin", p), 0.0)
        cc = pair.get(("cos", p), 0.0)
        if cs > 0 and cc > 0:
            total += min(cs, cc)  # |sin t| + |cos t| >= 1
        else:
            total += 0.0
    return total


def poly_lower(p: Poly) -> Optional[Env]:
    """Eventual lower bound: a dominant scale group bounded away from 0,
    with every other term strictly dominated."""
    if p.is_zero():
        return None
    groups = p.grouped_by_scale()
    (k, q), lead = groups[0]
    if len(lead) == 1 and not lead[0][0]:
        c = abs(lead[0][1])
    else:
        gm = group_min(lead)
        if gm is None or gm <= 0.0:
            gm_neg = group_min([(a, -c) for a, c in lead])
            if gm_neg is None or gm_neg <= 0.0:
                return None
            gm = gm_neg
        c = gm
    rest_env = Env(ZERO_K)
    for (k2, q2), terms in groups[1:]:
        for atoms, c2 in terms:
            rest_env = upper_add(rest_env,
                                 _term_upper((k2, q2, atoms), c2))
            if rest_env is None:
                return None
    lead_env = env_from_scale(k, q, c)
    if lead_env.kind == SUPERPOW:
        return None
    return lower_vs_upper(lead_env, rest_env)


def rat_upper(r: RatForm) -> Optional[Env]:
    nu = poly_upper(r.num)
    if r.is_poly():
        return nu
    dl = poly_lower(r.den)
    return upper_mul(nu, env_inv_upper(dl))


def rat_lower(r: RatForm) -> Optional[Env]:
    nl = poly_lower(r.num)
    if r.is_poly():
        return nl
    du = poly_upper(r.den)
    return lower_mul(nl, env_inv_lower(du))


# --------------------------------------------------------------------------
# along-a-sequence substitution
# --------------------------------------------------------------------------

_HALF_PI_VALUES = {F(0): 0.0, F(1, 2): 1.0, F(1): 0.0, F(3, 2): -1.0}
_HALF_PI_COS = {F(0): 1.0, F(1, 2): 0.0, F(1): -1.0, F(3, 2): 0.0}


def _osc_value_along(node, seq) -> Optional[float]:
    """Exact value of an oscillator along a PiSequence, or None."""
    if not isinstance(seq, PiSequence):
        return None
    if isinstance(node, SinRecipPow):
        if seq.power != node.p:
            return None
        mult, off = seq.mult, seq.offset
        if mult.denominator != 1:
            return None
        off = off % 2
        if mult.numerator % 2 == 0:
            return _HALF_PI_VALUES.get(off,
                                       math.sin(float(off) * math.pi))
        # odd multiples alternate sign; only an exact zero is usable
        return 0.0 if _HALF_PI_VALUES.get(off) == 0.0 else None
    if isinstance(node, CosRecipPow):
        if seq.power != node.p:
            return None
        mult, off = seq.mult, seq.offset
        if mult.denominator != 1:
            return None
        off = off % 2
        if mult.numerator % 2 == 0:
            return _HALF_PI_COS.get(off, math.cos(float(off) * math.pi))
        return 0.0 if _HALF_PI_COS.get(off) == 0.0 else None
    return None


def _points_disjoint(s1: SequenceRule, s2: SequenceRule) -> bool:
    """True when s1's points provably avoid s2's points."""
    if isinstance(s1, Midpoints) and s1.of == s2:
        return True
    if isinstance(s1, HarmonicMidpoints) and isinstance(s2, Harmonic):
        return True
    return False


def substitute_along(net: NetExpr, seq: SequenceRule
                     ) -> Optional[Tuple[NetExpr, bool]]:
    """Rewrite of the net valid at the points of ``seq``: oscillators and
    trains replaced by their values there.  Returns (rewritten, exact);
    exact=False means the rewrite differs from the net by a quantity
    below every power along the sequence (decaying bump heights,
    smoothing blends).  None when some node has no known value."""
    v = _osc_value_along(net, seq)
    if v is not None:
        return Const(v), True
    if isinstance(net, (SinRecipPow, CosRecipPow)):
        return None
    if isinstance(net, (Indicator, SpikeTrain)):
        if net.s == seq:
            return Const(1.0), True
        if _points_disjoint(seq, net.s):
            return Const(0.0), True
        return None
    if isinstance(net, BumpTrain):
        if net.schedule == seq:
            if isinstance(net.heights, ConstHeights):
                return Const(net.heights.c), True
            if isinstance(net.heights, DecayHeights) and net.heights.slope > 0:
                return Const(0.0), False  # heights below every power
            return None
        if isinstance(seq, Midpoints) and seq.of == net.schedule:
            return Const(0.0), True
        return None
    if isinstance(net, SmoothBlend):
        inner = substitute_along(net.source, seq)
        if inner is None:
            return None
        return inner[0], False
    if isinstance(net, (Const, Eps, ExpNegRecip)):
        return net, True
    children = nets.functional_children(net)
    subbed = []
    exact = True
    for c in children:
        s = substitute_along(c, seq)
        if s is None:
            return None
        subbed.append(s[0])
        exact = exact and s[1]
    if isinstance(net, Add):
        return nets.add(*subbed), exact
    if isinstance(net, Mul):
        return nets.mul(*subbed), exact
    if isinstance(net, Neg):
        return nets.neg(subbed[0]), exact
    if isinstance(net, Inv):
        v0 = subbed[0]
        if isinstance(v0, Const) and v0.c == 0:
            return None
        if isinstance(v0, Const):
            return Const(1.0 / v0.c), exact
        return Inv(v0), exact
    if isinstance(net, PowQ):
        try:
            return nets.powq(subbed[0], net.q), exact
        except Exception:
            return None
    if isinstance(net, AbsNode):
        return AbsNode(subbed[0]), exact
    if isinstance(net, MinNode):
        return MinNode(subbed[0], subbed[1]), exact
    if isinstance(net, MaxNode):
        return MaxNode(subbed[0], subbed[1]), exact
    if isinstance(net, RootN):
        return RootN(subbed[0], net.n), exact
    return None


def candidate_sequences(net: NetExpr) -> List[SequenceRule]:
    """Sequences worth probing for along-sequence decisions."""
    seqs: List[SequenceRule] = []

    def push(s):
        if s not in seqs:
            seqs.append(s)

    for node in nets.iter_nodes(net):
        if isinstance(node, SinRecipPow):
            push(PiSequence(F(1), F(0), node.p))
            push(PiSequence(F(2), F(1, 2), node.p))
            push(PiSequence(F(2), F(3, 2), node.p))
        elif isinstance(node, CosRecipPow):
            push(PiSequence(F(1), F(1, 2), node.p))
            push(PiSequence(F(2), F(0), node.p))
            push(PiSequence(F(2), F(1), node.p))
        elif isinstance(node, BumpTrain):
            push(node.schedule)
            push(Midpoints(node.schedule))
        elif isinstance(node, (Indicator, SpikeTrain)):
            push(node.s)
            push(Midpoints(node.s))
        elif isinstance(node, SmoothBlend):
            for s in candidate_sequences(node.source):
                push(s)
    push(Harmonic())
    push(Geometric(F(1, 2)))
    return seqs[:16]


def along_lower(net: NetExpr, seq: SequenceRule) -> Optional[Env]:
    """Certified lower bound for |net| along seq's points."""
    out = substitute_along(net, seq)
    if out is None:
        return None
    sub, exact = out
    lo = rat_lower(rat(sub))
    if lo is None:
        lo = info(sub).lower
    if lo is None:
        return None
    if not exact:
        # a below-every-power perturbation cannot beat a power lower bound
        lo = lower_vs_upper(lo, Env(SUPERPOW))
    return lo


def along_small(net: NetExpr, seq: SequenceRule) -> Optional[Env]:
    """Certified smallness (below every power) of |net| along seq."""
    out = substitute_along(net, seq)
    if out is None:
        return None
    sub, exact = out
    up = rat_upper(rat(sub))
    if up is None:
        up = info(sub).upper
    if up is None:
        return None
    if up.kind == ZERO_K:
        return up if exact else Env(SUPERPOW)
    if up.kind == SUPERPOW:
        return up
    return None
