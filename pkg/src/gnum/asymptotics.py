"""Decision procedures for moderateness, negligibility, strict
nonzeroness, equality modulo negligibility, and the partial order.

Exact on the symbolic fragment (scale polynomials, lattice/abs
composites, oscillators and trains with computable value sequences);
three-valued elsewhere: an answer of Unknown means the engine refuses to
guess, never that the property fails.

True/False answers carry replayable witnesses; ``harness`` can verify
each witness kind numerically on a grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import nets, profiles
from .nets import NetExpr, eval_net, is_real_net
from .profiles import (POW, SUPERGROW, SUPERPOW, ZERO_K, along_lower,
                       along_small, candidate_sequences, info, poly_nonneg,
                       rat, rat_lower, rat_upper)
from .sequences import Geometric

F = Fraction


# --------------------------------------------------------------------------
# verdict and witness types
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class WitnessRecord:
    """Replayable evidence for a True/False verdict.

    kinds:
      exponent-bound     data = (name, exponent, eps0)
      all-powers         data = (m_max_suggested,)
      lower-bound-along  data = (seq, q, c)
      small-along        data = (seq,)
      eventual-threshold data = ((a, eps0), ...)
      order-violation    data = (a, eps_example)
    """

    kind: str
    data: tuple = ()


@dataclass(frozen=True)
class DecisionTri:
    value: Optional[bool]           # True / False / None == Unknown
    witness: Optional[WitnessRecord] = None
    reason: str = ""

    @property
    def is_true(self) -> bool:
        return self.value is True

    @property
    def is_false(self) -> bool:
        return self.value is False

    @property
    def is_unknown(self) -> bool:
        return self.value is None

    def __repr__(self):
        tag = {True: "True", False: "False", None: "Unknown"}[self.value]
        extra = f" [{self.reason}]" if self.reason else ""
        return f"DecisionTri({tag}{extra})"


UNKNOWN = DecisionTri(None, reason="outside-fragment")


@dataclass(frozen=True)
class Valuation:
    """Sharp exponent sup{a : |x_eps| = O(eps^a)} on the power/exp
    fragment; the zero class (and every negligible net) maps to +inf."""

    kind: str                      # 'finite' | 'plus-infinity' | 'minus-infinity'
    v: Optional[Fraction] = None

    def __repr__(self):
        if self.kind == "finite":
            return f"Valuation({self.v})"
        return f"Valuation({'+inf' if self.kind == 'plus-infinity' else '-inf'})"


PLUS_INF = Valuation("plus-infinity")
MINUS_INF = Valuation("minus-infinity")


def _netof(x) -> NetExpr:
    return nets._net(x)


# --------------------------------------------------------------------------
# numeric calibration helpers (witness thresholds; claims stay symbolic)
# --------------------------------------------------------------------------

def _log_points(lo: float, hi: float, n: int):
    out = []
    for i in range(n):
        t = lo * (hi / lo) ** (i / (n - 1))
        out.append(t)
    return out


def _safe_abs(net: NetExpr, e: float) -> float:
    try:
        return abs(eval_net(net, e))
    except Exception:
        return math.inf


def _calibrate_lower(net: NetExpr, m: int) -> float:
    """Largest scan point below which |net| >= eps**m holds at every
    smaller scan point.

    A dense second pass guards against narrow cancellation windows
    (e.g. a train edge crossing a power term) slipping between the
    coarse scan points."""
    good = None
    for e in _log_points(1e-6, 0.6, 160):
        if _safe_abs(net, e) >= e ** m:
            good = e
        else:
            break
    if good is None:
        return 1e-6
    refined = None
    for e in _log_points(1e-6, good, 1400):
        if _safe_abs(net, e) >= e ** m:
            refined = e
        else:
            break
    return refined if refined is not None else 1e-6


def _calibrate_leq(x: NetExpr, y: NetExpr, a: int) -> float:
    """Largest scan point below which x <= y + eps**a holds at every
    smaller scan point."""
    good = None
    for e in _log_points(1e-6, 0.9, 160):
        try:
            vx, vy = eval_net(x, e), eval_net(y, e)
        except Exception:
            break
        if vx <= vy + e ** a + 1e-12 * max(1.0, abs(vy)):
            good = e
        else:
            break
    return good if good is not None else 1e-6


# --------------------------------------------------------------------------
# the decision procedures
# --------------------------------------------------------------------------

_UP_RANK = {ZERO_K: 0, SUPERPOW: 1, POW: 2}


def _uppers(net: NetExpr):
    """Upper envelopes from both analyses, strongest first."""
    out = [e for e in (rat_upper(rat(net)), info(net).upper) if e is not None]
    out.sort(key=lambda e: (_UP_RANK.get(e.kind, 3),
                            e.q if e.kind == POW else 0))
    return out


def _lowers(net: NetExpr):
    """Lower envelopes from both analyses, strongest first."""
    out = [e for e in (rat_lower(rat(net)), info(net).lower) if e is not None]
    out.sort(key=lambda e: (0 if e.kind == SUPERGROW else 1,
                            -e.q if e.kind == POW else 0))
    return out


def is_moderate(x) -> DecisionTri:
    """Does |x_eps| stay below some power eps**-N as eps -> 0?"""
    net = _netof(x)
    for up in _uppers(net):
        if up.kind in (ZERO_K, SUPERPOW):
            return DecisionTri(True, WitnessRecord("exponent-bound",
                                                   ("N", 0, 0.5)))
        if up.kind == POW:
            n_exp = max(0, math.ceil(-up.q))
            return DecisionTri(True, WitnessRecord("exponent-bound",
                                                   ("N", n_exp, 0.5)))
    lo = next(iter(_lowers(net)), None)
    if lo is not None and lo.kind == SUPERGROW:
        return DecisionTri(False, WitnessRecord("lower-bound-along",
                                                (Geometric(F(1, 2)), None, None)))
    i = info(net)
    if i.lower_seq is not None and i.lower_seq.env.kind == SUPERGROW:
        return DecisionTri(False, WitnessRecord("lower-bound-along",
                                                (i.lower_seq.seq, None, None)))
    for seq in candidate_sequences(net):
        lo = along_lower(net, seq)
        if lo is not None and lo.kind == SUPERGROW:
            return DecisionTri(False, WitnessRecord("lower-bound-along",
                                                    (seq, None, None)))
    return UNKNOWN


def is_negligible(x) -> DecisionTri:
    """Does |x_eps| fall below every power eps**m as eps -> 0?"""
    net = _netof(x)
    for up in _uppers(net):
        if up.kind in (ZERO_K, SUPERPOW):
            return DecisionTri(True, WitnessRecord("all-powers", (12,)))
    lo = next(iter(_lowers(net)), None)
    if lo is not None:
        if lo.kind == SUPERGROW:
            return DecisionTri(False, WitnessRecord(
                "lower-bound-along", (Geometric(F(1, 2)), None, lo.c)))
        m_star = max(1, math.floor(lo.q) + 1)
        return DecisionTri(False, WitnessRecord(
            "exponent-bound", ("m-fails", m_star,
                               _calibrate_lower(net, m_star))))
    i = info(net)
    if i.lower_seq is not None and i.lower_seq.env.kind in (POW, SUPERGROW):
        e = i.lower_seq.env
        return DecisionTri(False, WitnessRecord(
            "lower-bound-along",
            (i.lower_seq.seq, e.q if e.kind == POW else None, e.c)))
    for seq in candidate_sequences(net):
        lo = along_lower(net, seq)
        if lo is not None and lo.kind in (POW, SUPERGROW):
            return DecisionTri(False, WitnessRecord(
                "lower-bound-along",
                (seq, lo.q if lo.kind == POW else None, lo.c)))
    return UNKNOWN


def is_strictly_nonzero(x) -> DecisionTri:
    """|x_eps| >= eps**m eventually, for some m (= invertibility)."""
    net = _netof(x)
    lo = next(iter(_lowers(net)), None)
    if lo is not None:
        if lo.kind == SUPERGROW:
            m = 1
        elif lo.q.denominator == 1 and lo.c >= 1.0:
            m = max(0, int(lo.q))
        else:
            m = max(0, math.floor(lo.q) + 1)
        eps0 = _calibrate_lower(net, m)
        return DecisionTri(True, WitnessRecord("exponent-bound",
                                               ("m", m, eps0)))
    for up in _uppers(net):
        if up.kind in (ZERO_K, SUPERPOW):
            return DecisionTri(False, WitnessRecord(
                "small-along", (Geometric(F(1, 2)),)))
    i = info(net)
    if i.small_seq is not None:
        return DecisionTri(False, WitnessRecord("small-along",
                                                (i.small_seq.seq,)))
    for seq in candidate_sequences(net):
        sm = along_small(net, seq)
        if sm is not None:
            return DecisionTri(False, WitnessRecord("small-along", (seq,)))
    return UNKNOWN


def gn_equal(x, y) -> DecisionTri:
    """Equality in the quotient ring: is x - y negligible?"""
    d = nets.sub(_netof(x), _netof(y))
    return is_negligible(d)


def valuation(x) -> Optional[Valuation]:
    """Exact sharp exponent on the power/exp fragment; None if outside."""
    net = _netof(x)
    r = rat(net).simplify()
    if r.num.is_zero():
        return PLUS_INF

    def lead_scale(p):
        groups = p.grouped_by_scale()
        (k, q), lead = groups[0]
        if len(lead) != 1 or lead[0][0]:
            return None
        for (k2, q2), terms in groups[1:]:
            for atoms, c2 in terms:
                e = profiles._term_upper((k2, q2, atoms), c2)
                if e is None or e.kind == SUPERGROW:
                    return None
                if e.kind == POW and (k > 0 or e.q <= q):
                    return None
        return (k, q)

    num_ld = lead_scale(r.num)
    den_ld = (F(0), F(0)) if r.is_poly() else lead_scale(r.den)
    if num_ld is None or den_ld is None:
        return None
    k_eff = num_ld[0] - den_ld[0]
    q_eff = num_ld[1] - den_ld[1]
    if k_eff > 0:
        return PLUS_INF
    if k_eff < 0:
        return MINUS_INF
    return Valuation("finite", q_eff)


def leq(x, y, a_max: int = 6) -> DecisionTri:
    """Partial order on real generalized numbers: r <= s iff for every
    a > 0, r_eps <= s_eps + eps**a for eps small enough."""
    xn, yn = _netof(x), _netof(y)
    if not (is_real_net(xn) and is_real_net(yn)):
        raise TypeError("leq is defined for real-valued nets")
    d = nets.sub(yn, xn)
    r = rat(d)
    if r.is_poly():
        kept = {}
        for m, c in r.num.terms.items():
            e = profiles._term_upper(m, c)
            if e is not None and e.kind in (ZERO_K, SUPERPOW):
                continue  # below every power: irrelevant for the order
            kept[m] = c
        from .scales import Poly
        R = Poly(kept)
        if R.is_zero():
            return DecisionTri(True, _leq_thresholds(xn, yn, a_max),
                               reason="equal-mod-negligible")
        if poly_nonneg(R):
            return DecisionTri(True, _leq_thresholds(xn, yn, a_max))
        if profiles.poly_lower(R) is not None:
            groups = R.grouped_by_scale()
            (k, q), lead = groups[0]
            sign = _group_sign(lead)
            if sign is not None and sign > 0:
                return DecisionTri(True, _leq_thresholds(xn, yn, a_max))
            if sign is not None and sign < 0:
                a_w = max(1, math.floor(q) + 1) if k == 0 else 1
                pt = _find_order_violation(xn, yn, a_w)
                if pt is not None:
                    return DecisionTri(False, WitnessRecord(
                        "order-violation", (a_w, pt)))
                return DecisionTri(False, WitnessRecord(
                    "order-violation", (a_w, None)))
    lo_ivl = info(d).ivl[0]
    if lo_ivl >= 0.0:
        return DecisionTri(True, _leq_thresholds(xn, yn, a_max),
                           reason="pointwise")
    # along-sequence refutation: if y - x is eventually bounded below a
    # strictly negative power along a computable sequence, the order
    # characterization fails cofinally at every larger exponent
    from .profiles import substitute_along
    for seq in candidate_sequences(d):
        out = substitute_along(d, seq)
        if out is None:
            continue
        sub_net, exact = out
        r2 = rat(sub_net)
        if not r2.is_poly():
            continue
        kept2 = {}
        for m, c in r2.num.terms.items():
            e = profiles._term_upper(m, c)
            if e is not None and e.kind in (ZERO_K, SUPERPOW):
                continue
            kept2[m] = c
        from .scales import Poly
        R2 = Poly(kept2)
        if R2.is_zero() or profiles.poly_lower(R2) is None:
            continue
        groups = R2.grouped_by_scale()
        (k, q), lead = groups[0]
        sign = _group_sign(lead)
        if sign is not None and sign < 0:
            a_w = max(1, math.floor(q) + 1) if k == 0 else 1
            pt = _find_violation_on_seq(xn, yn, a_w, seq)
            if pt is not None:
                return DecisionTri(False, WitnessRecord("order-violation",
                                                        (a_w, pt)))
    return UNKNOWN


def _find_violation_on_seq(x: NetExpr, y: NetExpr, a: int, seq) -> Optional[float]:
    for j in range(1, 64):
        try:
            e = seq.value(j)
        except Exception:
            continue
        if not 0 < e <= 1:
            continue
        try:
            if eval_net(x, e) > eval_net(y, e) + e ** a:
                return e
        except Exception:
            continue
    return None


def _group_sign(lead) -> Optional[int]:
    """Definite sign of a single-scale group, if certifiable."""
    if len(lead) == 1 and not lead[0][0]:
        c = lead[0][1]
        if isinstance(c, complex):
            return None
        return 1 if c > 0 else (-1 if c < 0 else 0)
    gm = profiles.group_min(lead)
    if gm is not None and gm > 0:
        return 1
    gm_neg = profiles.group_min([(a, -c) for a, c in lead])
    if gm_neg is not None and gm_neg > 0:
        return -1
    return None


def _leq_thresholds(x: NetExpr, y: NetExpr, a_max: int) -> WitnessRecord:
    data = tuple((a, _calibrate_leq(x, y, a)) for a in range(1, a_max + 1))
    return WitnessRecord("eventual-threshold", data)


def _find_order_violation(x: NetExpr, y: NetExpr, a: int) -> Optional[float]:
    for e in _log_points(1e-6, 0.9, 200):
        try:
            if eval_net(x, e) > eval_net(y, e) + e ** a:
                return e
        except Exception:
            continue
    return None
