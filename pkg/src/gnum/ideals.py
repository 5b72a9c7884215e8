"""Finitely generated ideal algebra: principal reduction, intersection,
membership, powers, radicals, and radicality of principal ideals.

Membership y in x*R is three-valued.  True answers come with a moderate
witness a such that a*x = y up to negligibility, built from (in order)
a structural factor, exact division in the normal form, or a
Tikhonov-regularized quotient justified by a domination bound
|y| <= C * eps**-M * |x|; each candidate witness is replayed numerically
before the answer is committed.  False answers need a forcing argument:
a located sequence where x is below every power while y keeps power
size, so no moderate multiple of x can track y.  Everything else is
Unknown.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from . import nets
from .asymptotics import (DecisionTri, UNKNOWN, WitnessRecord,
                          is_negligible, is_strictly_nonzero, leq)
from .errors import PreconditionError
from .harness import GridSpec
from .lattice import gabs, gmax, gmin
from .nets import (AbsFactor, Const, GNumber, Mul, Neg, NetExpr,
                   RegularizedQuotient, Tier, absn, eval_net, gnumber,
                   nonneg_net, rootn)
from .profiles import (POW, SUPERGROW, SUPERPOW, ZERO_K, along_lower,
                       along_small, candidate_sequences, canonical_net, info,
                       poly_upper, rat, rat_lower, rat_upper)
from .scales import RatForm

F = Fraction

_REPLAY_GRID = GridSpec(n_points=240, eps_min=1e-5)


@dataclass(frozen=True)
class FinIdeal:
    """Finitely generated ideal, as its generator list."""

    generators: Tuple[GNumber, ...]
    principal_form: Optional[GNumber] = None

    def __post_init__(self):
        if not self.generators:
            raise PreconditionError("an ideal needs at least one generator")


@dataclass(frozen=True)
class RootFamilyIdeal:
    """Truncation of the radical of a principal ideal: the ideal
    generated by the roots |s|**(1/n) for n <= root_cap."""

    base: GNumber
    root_cap: int = 8


def _gn(x) -> GNumber:
    return x if isinstance(x, GNumber) else gnumber(nets._net(x))


def _is_zero_net(net: NetExpr) -> bool:
    return rat(net).num.is_zero()


# --------------------------------------------------------------------------
# principal reduction and intersection
# --------------------------------------------------------------------------

def principal_reduce(J: FinIdeal) -> GNumber:
    """The sum-of-absolute-values generator |g1| + |g2| + ... of J."""
    out = gabs(J.generators[0], resmooth=False)
    for g in J.generators[1:]:
        out = nets.g_add(out, gabs(g, resmooth=False))
    return out


def principal_forms(J: FinIdeal) -> Tuple[GNumber, GNumber]:
    """(sum form, max form); the two generate the same ideal."""
    sum_form = principal_reduce(J)
    max_form = gabs(J.generators[0], resmooth=False)
    for g in J.generators[1:]:
        max_form = gmax(max_form, gabs(g, resmooth=False), resmooth=False)
    return sum_form, max_form


def intersect_principal(x, y) -> GNumber:
    """Generator of x*R intersect y*R: min(|x|, |y|)."""
    return gmin(gabs(_gn(x), resmooth=False), gabs(_gn(y), resmooth=False),
                resmooth=False)


# --------------------------------------------------------------------------
# membership
# --------------------------------------------------------------------------

def _strip_negs(net: NetExpr) -> Tuple[NetExpr, float]:
    sign = 1.0
    while isinstance(net, Neg):
        net = net.x
        sign = -sign
    return net, sign


def _structural_factor(y: NetExpr, x: NetExpr) -> Optional[NetExpr]:
    yy, sign = _strip_negs(y)
    if yy == x:
        return Const(sign)
    if isinstance(yy, Mul):
        if yy.l == x:
            return nets.mul(Const(sign), yy.r) if sign != 1.0 else yy.r
        if yy.r == x:
            return nets.mul(Const(sign), yy.l) if sign != 1.0 else yy.l
    return None


def _exact_quotient(y: NetExpr, x: NetExpr, use_abs: bool) -> Optional[NetExpr]:
    """a with rat(a) = rat(y)/rat(x) when the division is exact and the
    quotient is a moderate polynomial."""
    from .profiles import _rat_abs
    ry = _rat_abs(y) if use_abs else rat(y)
    rx = _rat_abs(x) if use_abs else rat(x)
    if rx.num.is_zero():
        return None
    q = RatForm(ry.num.mul(rx.den), ry.den.mul(rx.num)).simplify()
    if not q.is_poly() or q.num.is_zero():
        return None
    if poly_upper(q.num) is None:
        return None  # not certifiably moderate
    return canonical_net(q.num)


def _phase_to_abs(net: NetExpr) -> Optional[NetExpr]:
    """Factor p with p * net = |net| mod negligibility (None = identity)."""
    if nonneg_net(net):
        return None
    return AbsFactor(net)


def _phase_from_abs(net: NetExpr) -> Optional[NetExpr]:
    """Factor p with p * |net| = net mod negligibility (None = identity)."""
    if nonneg_net(net):
        return None
    return AbsFactor(net, inverse=True)


def _compose_witness(parts: List[Optional[NetExpr]]) -> NetExpr:
    real = [p for p in parts if p is not None]
    if not real:
        return Const(1.0)
    out = real[0]
    for p in real[1:]:
        out = nets.mul(out, p)
    return out


def _replay_witness(a: NetExpr, x: NetExpr, y: NetExpr,
                    m_max: int = 8) -> bool:
    """Numeric sanity check of a membership witness: |a*x - y| must fall
    below every tested power, up to the evaluator's rounding floor."""
    from .harness import replay_negligible_diff
    return bool(replay_negligible_diff(nets.mul(a, x), y, m_max,
                                       _REPLAY_GRID))


def _dominations(y_abs: NetExpr, x_abs: NetExpr):
    """Candidate (C, M) with |y| <= C * eps**-M * |x|, cheapest first."""
    up = rat_upper(rat(y_abs)) or info(y_abs).upper
    lo = rat_lower(rat(x_abs)) or info(x_abs).lower
    if up is not None and lo is not None and up.kind in (ZERO_K, SUPERPOW,
                                                         POW):
        if lo.kind == POW and up.kind == POW:
            m = max(0, math.ceil(lo.q - up.q))
            yield (2.0 * up.c / lo.c, m)
        elif lo.kind == SUPERGROW:
            yield (1.0, 0)
    for C in (1.0, 2.0, 4.0, 8.0):
        for M in (0, 1, 2):
            yield (C, M)


def membership(y, x, m_max: int = 12) -> DecisionTri:
    """Decide y in x*R (the principal ideal of x)."""
    gy, gx = _gn(y), _gn(x)
    ynet, xnet = gy.net, gx.net
    if is_negligible(ynet).is_true:
        return DecisionTri(True, WitnessRecord("membership-factor",
                                               (Const(0.0),)))
    a = _structural_factor(ynet, xnet)
    if a is not None and _replay_witness(a, xnet, ynet):
        return DecisionTri(True, WitnessRecord("membership-factor", (a,)))
    a = _exact_quotient(ynet, xnet, use_abs=False)
    if a is not None and _replay_witness(a, xnet, ynet):
        return DecisionTri(True, WitnessRecord("membership-factor", (a,)))
    b = _exact_quotient(ynet, xnet, use_abs=True)
    if b is not None:
        a = _compose_witness([_phase_from_abs(ynet), b, _phase_to_abs(xnet)])
        if _replay_witness(a, xnet, ynet):
            return DecisionTri(True, WitnessRecord("membership-factor", (a,)))
    # domination route: |y| <= C eps^-M |x| makes the regularized
    # quotient a moderate witness
    y_abs = ynet if nonneg_net(ynet) else absn(ynet)
    x_abs = xnet if nonneg_net(xnet) else absn(xnet)
    seen = set()
    for C, M in _dominations(y_abs, x_abs):
        if (C, M) in seen:
            continue
        seen.add((C, M))
        bound = nets.mul(Const(C), x_abs) if M == 0 else \
            nets.mul(Const(C), nets.mul(nets.powq(nets.EPS, -M), x_abs))
        t = leq(y_abs, bound)
        if not t.is_true:
            continue
        b = RegularizedQuotient(y_abs, x_abs, C if M == 0 else None)
        a = _compose_witness([_phase_from_abs(ynet), b, _phase_to_abs(xnet)])
        if _replay_witness(a, xnet, ynet):
            return DecisionTri(True, WitnessRecord(
                "membership-factor", (a,), ), reason=f"dominated C={C} M={M}")
    # forcing refutation: x below every power along a sequence where y
    # keeps power size
    seqs = candidate_sequences(xnet)
    i = info(xnet)
    if i.small_seq is not None and i.small_seq.seq not in seqs:
        seqs.insert(0, i.small_seq.seq)
    for seq in seqs:
        sm = along_small(xnet, seq)
        if sm is None:
            continue
        loy = along_lower(ynet, seq)
        if loy is not None and loy.kind in (POW, SUPERGROW):
            return DecisionTri(False, WitnessRecord(
                "membership-forcing",
                (seq, loy.q if loy.kind == POW else None, loy.c)))
    return UNKNOWN


def power_membership(r, J, m: int) -> DecisionTri:
    """r in J**m for principal J = <g>: reduces to |r|**(1/m) in <g>."""
    if m < 1:
        raise PreconditionError("power must be a positive integer")
    gr = _gn(r)
    g = J.net if isinstance(J, GNumber) else principal_reduce(J).net \
        if isinstance(J, FinIdeal) else nets._net(J)
    if is_negligible(gr.net).is_true:
        return DecisionTri(True, WitnessRecord("membership-factor",
                                               (Const(0.0),)))
    y = rootn(absn(gr.net), m) if m > 1 else absn(gr.net)
    return membership(y, g)


def radical_membership(y, R: RootFamilyIdeal) -> DecisionTri:
    """y in the radical of <base>, tested against the root family
    |base|**(1/n) for n <= root_cap; CapReached when the truncation is
    the only obstruction."""
    gy = _gn(y)
    base = R.base.net
    # uniform refutation: along a sequence where base (hence every root
    # of it) is below every power, y keeps power size
    for seq in candidate_sequences(base):
        if along_small(base, seq) is None:
            continue
        loy = along_lower(gy.net, seq)
        if loy is not None and loy.kind in (POW, SUPERGROW):
            return DecisionTri(False, WitnessRecord(
                "membership-forcing",
                (seq, loy.q if loy.kind == POW else None, loy.c)))
    base_abs = base if nonneg_net(base) else absn(base)
    for n in range(1, R.root_cap + 1):
        g = base_abs if n == 1 else rootn(base_abs, n)
        t = membership(gy.net, g)
        if t.is_true:
            return DecisionTri(True, t.witness, reason=f"root n={n}")
    return DecisionTri(None, reason="CapReached")


# --------------------------------------------------------------------------
# radical principal ideals
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DipForcingData:
    """Replayable refutation of sqrt(|s|) in <s>: for each moderateness
    budget N, a located point p with |s(p)| at level p**L and
    sqrt(|s(p)|) >= p**(L/2) >> p**-N * |s(p)|."""

    levels: Tuple[Tuple[int, float, float], ...]  # (N, point, |s(point)|)


def _find_level_point(snet: NetExpr, lo_pt: float, hi_pt: float,
                      level_exp: float) -> Optional[float]:
    """Bisect |s(e)| - e**level_exp between a point where s is tiny and
    one where it is big."""
    g = lambda e: abs(eval_net(snet, e)) - e ** level_exp
    a, b = lo_pt, hi_pt
    ga, gb = g(a), g(b)
    if ga == 0.0:
        return a
    if gb == 0.0:
        return b
    if (ga < 0) == (gb < 0):
        return None
    for _ in range(200):
        mid = 0.5 * (a + b)
        gm = g(mid)
        if gm == 0.0 or (b - a) < 1e-16 * b:
            return mid
        if (gm < 0) == (ga < 0):
            a, ga = mid, gm
        else:
            b = mid
    return 0.5 * (a + b)


def dip_forcing_data(s, n_root: int = 2, n_levels: int = 3,
                     k_exp: int = 1) -> Optional[DipForcingData]:
    """Locate the level points of the dip-forcing refutation."""
    snet = _gn(s).net
    i = info(snet)
    small = i.small_seq.seq if i.small_seq is not None else None
    big = i.lower_seq.seq if i.lower_seq is not None else None
    if small is None or big is None:
        for seq in candidate_sequences(snet):
            if small is None and along_small(snet, seq) is not None:
                small = seq
            if big is None:
                lo = along_lower(snet, seq)
                if lo is not None and lo.kind == POW:
                    big = seq
    if small is None or big is None:
        return None
    out = []
    for n_budget in range(0, n_levels + 1):
        lvl = max(math.ceil(n_budget * n_root / (n_root - 1)) + 2, k_exp + 1)
        found = None
        for j in range(2, 200):
            p_small = small.value(j)
            if p_small >= 1.0 / (n_budget + 2):
                continue
            if p_small ** lvl < 1e-250:
                break  # level below any floating resolution
            # nearest big anchor adjacent to the small point
            p_big = None
            for jb in range(1, 400):
                v = big.value(jb)
                if v < p_small:
                    break
                p_big = v
            if p_big is None:
                continue
            if abs(eval_net(snet, p_small)) >= p_small ** lvl or \
                    abs(eval_net(snet, p_big)) <= p_big ** lvl:
                continue
            root = _find_level_point(snet, p_small, p_big, lvl)
            if root is None:
                continue
            sval = abs(eval_net(snet, root))
            if sval <= 0.0:
                continue
            yval = sval ** (1.0 / n_root)
            if yval >= root ** (lvl / n_root) * 0.25 and \
                    root ** (-n_budget) * sval <= 0.5 * yval:
                found = (n_budget, root, sval)
                break
        if found is None:
            break  # deeper levels fall below double resolution
        out.append(found)
    if len(out) < 2:
        return None
    return DipForcingData(tuple(out))


def is_radical_principal(s) -> DecisionTri:
    """Is the principal ideal <s> radical (equivalently idempotent)?

    Decided through the single check sqrt(|s|) in <s> on the generator.
    True for the zero class and for invertible s; for a continuous-tier
    s that is neither negligible nor strictly nonzero, any moderate a
    leaves |a*s - sqrt(|s|)| >= eps**(N+1)/2 at located dip-level points,
    so the answer is False with a replayable refutation.
    """
    gs = _gn(s)
    snet = gs.net
    if is_negligible(snet).is_true:
        return DecisionTri(True, WitnessRecord("membership-factor",
                                               (Const(0.0),)),
                           reason="zero ideal")
    y = rootn(absn(snet), 2)
    t = membership(y, snet)
    if not t.is_unknown:
        return t
    tn = is_negligible(snet)
    tz = is_strictly_nonzero(snet)
    if tn.is_false and tz.is_false and gs.tier <= Tier.Continuous:
        data = dip_forcing_data(snet, n_root=2)
        if data is not None:
            return DecisionTri(False, WitnessRecord("dip-forcing",
                                                    (data,)))
        return DecisionTri(False, WitnessRecord("dip-forcing", (None,)),
                           reason="level points not materialized")
    return UNKNOWN


def replay_dip_forcing(s, data: DipForcingData, n_root: int = 2) -> bool:
    """Verify the dip-forcing inequalities at the located points: at each
    (N, p) the n-th root of |s(p)| exceeds twice eps**-N * |s(p)|, so a
    moderate factor of budget N cannot reach the root there."""
    snet = _gn(s).net
    ok = True
    for n_budget, p, _sval in data.levels:
        v = abs(eval_net(snet, p))
        yv = v ** (1.0 / n_root)
        if not (yv > 0.0 and p ** (-n_budget) * v <= 0.5 * yv):
            ok = False
    return ok
