"""Independent numeric oracle: grid evaluation, witness replay, log-log
exponent regression, and seeded random net generation.

The replay functions only ever *falsify* decided claims; a finite grid
cannot decide an asymptotic statement, so Unknown is never upgraded.
The calibration convention for O(.)-claims: the largest 70% of the grid
(the head) fits the constant, the smallest 30% (the tail) tests it.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from . import nets
from .asymptotics import DecisionTri
from .errors import DomainError
from .nets import NetExpr, Tier, eval_net
from .sequences import Geometric, Harmonic, SequenceRule

F = Fraction


@dataclass(frozen=True)
class GridSpec:
    """Log-spaced evaluation grid on [eps_min, 1]."""

    n_points: int = 1000
    eps_min: float = 1e-6
    spacing: str = "log"

    def __post_init__(self):
        if self.eps_min <= 0 or self.n_points < 8:
            raise DomainError("grid needs eps_min > 0 and >= 8 points")

    def points(self) -> np.ndarray:
        return np.logspace(math.log10(self.eps_min), 0.0, self.n_points)

    def split(self) -> Tuple[np.ndarray, np.ndarray]:
        """(tail, head): smallest 30% of the points, and the rest."""
        pts = self.points()
        cut = max(1, int(0.3 * len(pts)))
        return pts[:cut], pts[cut:]


DEFAULT_GRID = GridSpec()


@dataclass
class ReplayReport:
    claim: str
    passed: bool
    max_violation: float = 0.0
    arg_eps: Optional[float] = None
    detail: str = ""

    def __bool__(self):
        return self.passed


def _abs_at(net: NetExpr, e: float) -> float:
    """|net(e)|; nan when the evaluator cannot produce a value (domain
    guard or an underflow/overflow collision inside a product)."""
    try:
        v = abs(eval_net(net, e))
    except Exception:
        return math.nan
    return v


def eval_grid(net: NetExpr, grid: GridSpec = DEFAULT_GRID):
    """(eps, value) rows; values may be complex."""
    return [(float(e), eval_net(net, float(e))) for e in grid.points()]


# --------------------------------------------------------------------------
# replay of asymptotic claims
# --------------------------------------------------------------------------

def replay_negligible(x, m_max: int = 12,
                      grid: GridSpec = DEFAULT_GRID) -> ReplayReport:
    """Check |x| <= C * eps**m on the grid tail for each m <= m_max,
    with C fitted on the head."""
    net = nets._net(x)
    tail, head = grid.split()
    vh = np.array([_abs_at(net, float(e)) for e in head])
    vt = np.array([_abs_at(net, float(e)) for e in tail])
    # points the evaluator cannot resolve (0*inf collisions, overflow of
    # an internally compensated product) carry no evidence either way
    head, vh = head[np.isfinite(vh)], vh[np.isfinite(vh)]
    tail, vt = tail[np.isfinite(vt)], vt[np.isfinite(vt)]
    if not len(head):
        return ReplayReport(f"negligible(m<={m_max})", True,
                            detail="no evaluable points")
    ext = np.logspace(math.log10(grid.eps_min) - 12.0,
                      math.log10(grid.eps_min), 400)
    ve = np.array([_abs_at(net, float(e)) for e in ext])
    ext, ve = ext[np.isfinite(ve)], ve[np.isfinite(ve)]
    for m in range(0, m_max + 1):
        # the fitted constant gets a fixed slack: O(.) constants are
        # arbitrary, and sparsely supported nets may peak off the head grid
        C = 4.0 * float(np.max(vh / head ** m)) if len(head) else 0.0
        bound = C * tail ** m * (1 + 1e-9) + 1e-290
        bad = vt > bound
        if bad.any():
            # adjudicate: a transient ratio hump turns over at depth, a
            # genuine violation keeps rising into the deep end.  Probe
            # twelve decades below the grid floor and demand decay by the
            # deepest quarter.
            if len(ext) > 8:
                re_ = ve / ext ** m
                peak = max(float(np.max(re_)),
                           float(np.max(vt / tail ** m)),
                           float(np.max(vh / head ** m)))
                cut = len(ext) // 4
                deep_max = float(np.max(re_[:cut]))
                if deep_max <= 0.5 * peak + 1e-290:
                    continue
            i = int(np.argmax(vt - bound))
            return ReplayReport(f"negligible(m<={m_max})", False,
                                float((vt - bound)[i]), float(tail[i]),
                                f"fails at m={m}")
    return ReplayReport(f"negligible(m<={m_max})", True)


def replay_negligible_diff(a, b, m_max: int = 12,
                           grid: GridSpec = DEFAULT_GRID) -> ReplayReport:
    """Check that a - b is negligible, discounting the evaluator's
    rounding floor (1e-13 of the local value scale); for replaying
    witness identities a*x = y whose two sides are computed by
    different float paths."""
    an, bn = nets._net(a), nets._net(b)
    tail, head = grid.split()

    def measure(e):
        va, vb = eval_net(an, float(e)), eval_net(bn, float(e))
        scale = 1.0 + abs(va) + abs(vb)
        out = abs(va - vb) - 1e-13 * scale
        return max(0.0, out) if not math.isnan(out) else 0.0

    vh = np.array([measure(e) for e in head])
    vt = np.array([measure(e) for e in tail])
    for m in range(0, m_max + 1):
        C = float(np.max(vh / head ** m))
        bound = C * tail ** m * (1 + 1e-9) + 1e-290
        bad = vt > bound
        if bad.any():
            i = int(np.argmax(vt - bound))
            return ReplayReport(f"negligible-diff(m<={m_max})", False,
                                float((vt - bound)[i]), float(tail[i]),
                                f"fails at m={m}")
    return ReplayReport(f"negligible-diff(m<={m_max})", True)


def replay_moderate(x, n_exp: int, grid: GridSpec = DEFAULT_GRID) -> ReplayReport:
    """Check |x| <= C * eps**-N with C fitted on the head."""
    net = nets._net(x)
    tail, head = grid.split()
    vh = np.array([_abs_at(net, float(e)) for e in head])
    vt = np.array([_abs_at(net, float(e)) for e in tail])
    head, vh = head[np.isfinite(vh)], vh[np.isfinite(vh)]
    tail, vt = tail[np.isfinite(vt)], vt[np.isfinite(vt)]
    if not len(head):
        return ReplayReport("moderate", True, detail="no evaluable points")
    C = 4.0 * float(np.max(vh * head ** n_exp))
    bound = C * tail ** (-n_exp) * (1 + 1e-9) + 1e-290
    bad = vt > bound
    if bad.any():
        i = int(np.argmax(vt - bound))
        return ReplayReport("moderate", False, float((vt - bound)[i]),
                            float(tail[i]))
    return ReplayReport("moderate", True)


def replay_lower_eventual(x, m: int, eps0: float,
                          grid: GridSpec = DEFAULT_GRID) -> ReplayReport:
    """Check |x| >= eps**m on grid points below eps0 (strict nonzeroness)."""
    net = nets._net(x)
    pts = [float(e) for e in grid.points() if e <= eps0]
    if len(pts) < 3:
        pts = [eps0 * 0.5 ** k for k in range(1, 12) if eps0 * 0.5 ** k > 1e-9]
    worst, arg = 0.0, None
    for e in pts:
        v = _abs_at(net, e)
        need = e ** m * (1 - 1e-9)
        if v < need:
            if need - v > worst:
                worst, arg = need - v, e
    if arg is not None:
        return ReplayReport(f"|x|>=eps^{m} below {eps0:g}", False, worst, arg)
    return ReplayReport(f"|x|>=eps^{m} below {eps0:g}", True)


def replay_growth_along(x, seq: SequenceRule, m_star: int,
                        n_terms: int = 64) -> ReplayReport:
    """Check that |x(eps_j)| / eps_j**m_star does not collapse (and
    typically grows) along the sequence, refuting |x| = O(eps**m_star)
    with a fitted constant."""
    net = nets._net(x)
    ratios = []
    j = 0
    while len(ratios) < n_terms and j < 4 * n_terms:
        j += 1
        e = seq.value(j)
        if e <= 0:
            break
        v = _abs_at(net, e)
        if math.isinf(v):
            return ReplayReport("growth-along", True, detail="overflows")
        scale = e ** m_star
        if scale == 0.0:
            break
        r = v / scale
        if not math.isnan(r):
            ratios.append(r)
    if len(ratios) < 6:
        return ReplayReport("growth-along", True,
                            detail="insufficient evaluable points")
    early = max(ratios[:4]) + 1e-300
    late = max(ratios[-4:])
    ok = late >= 1.15 * early or late > 1e6
    return ReplayReport("growth-along", ok,
                        detail=f"ratio {early:.3g} -> {late:.3g}")


def _local_min_abs(net: NetExpr, lo: float, hi: float, iters: int = 80) -> Tuple[float, float]:
    """Ternary search for a local minimum of |net| on [lo, hi]."""
    a, b = lo, hi
    for _ in range(iters):
        m1 = a + (b - a) / 3.0
        m2 = b - (b - a) / 3.0
        if _abs_at(net, m1) <= _abs_at(net, m2):
            b = m2
        else:
            a = m1
    mid = 0.5 * (a + b)
    return mid, _abs_at(net, mid)


def replay_small_along(x, seq: SequenceRule, m_max: int = 12,
                       n_terms: int = 48) -> ReplayReport:
    """For each m <= m_max exhibit a point with |x| < eps**m near the
    sequence (refutes strict nonzeroness)."""
    net = nets._net(x)
    ladder = list(range(0, n_terms + 1))
    j = max(n_terms, 1)
    while j < 5000:
        j = int(j * 1.6) + 1
        ladder.append(j)
    for m in range(0, m_max + 1):
        found = False
        for j in ladder:
            try:
                e = seq.value(j)
            except Exception:
                continue
            if not 0 < e <= 1:
                continue
            if _abs_at(net, e) < e ** m:
                found = True
                break
            gap = min(e - seq.value(j + 1), (seq.value(j - 1) - e)
                      if j > 1 else e * 0.1) * 0.45
            if gap <= 0:
                continue
            pt, v = _local_min_abs(net, e - gap, e + gap)
            if v < pt ** m:
                found = True
                break
        if not found:
            # distinguish genuine failure from float-resolution exhaustion:
            # at the best candidate the observed minimum must exceed the
            # local derivative-times-ulp band for the failure to count
            best_pt, best_v = None, math.inf
            for j in ladder[:n_terms]:
                try:
                    e = seq.value(j)
                except Exception:
                    continue
                if not 0 < e <= 1:
                    continue
                v = _abs_at(net, e)
                if v < best_v:
                    best_pt, best_v = e, v
            if best_pt is not None:
                # smallest value change one float step away bounds what
                # the evaluator can resolve near a cusp
                ulp = best_pt * 2.0 ** -52
                jump = min(abs(_abs_at(net, min(1.0, best_pt + k * ulp))
                               - best_v) for k in (1.0, 2.0, 4.0))
                noise = 64.0 * (jump + best_pt * 2.0 ** -52)
                if best_v <= noise:
                    return ReplayReport(
                        "small-along", True,
                        detail=f"resolution-limited below eps^{m}")
            return ReplayReport("small-along", False,
                                detail=f"no point below eps^{m}")
    return ReplayReport("small-along", True)


def replay_leq(x, y, thresholds, grid: GridSpec = DEFAULT_GRID) -> ReplayReport:
    """Check x <= y + eps**a below each witnessed threshold."""
    xn, yn = nets._net(x), nets._net(y)
    pts = grid.points()
    for a, eps0 in thresholds:
        sel = [float(e) for e in pts if e <= eps0]
        for e in sel:
            vx, vy = eval_net(xn, e), eval_net(yn, e)
            if vx > vy + e ** a + 1e-11 * max(1.0, abs(vy)):
                return ReplayReport("leq", False, float(vx - vy), e,
                                    f"violated at a={a}")
    return ReplayReport("leq", True)


def replay_order_violation(x, y, a: int, pt: Optional[float],
                           grid: GridSpec = DEFAULT_GRID) -> ReplayReport:
    xn, yn = nets._net(x), nets._net(y)
    cands = [pt] if pt is not None else [float(e) for e in grid.points()]
    for e in cands:
        if e is None:
            continue
        try:
            if eval_net(xn, e) > eval_net(yn, e) + e ** a:
                return ReplayReport("order-violation", True, arg_eps=e)
        except Exception:
            continue
    return ReplayReport("order-violation", False,
                        detail="no violating point found")


def verify_decision(claim: str, tri: DecisionTri, x, y=None,
                    grid: GridSpec = DEFAULT_GRID,
                    m_max: int = 12) -> Optional[ReplayReport]:
    """Replay a decided verdict; None for Unknown (nothing to check)."""
    if tri.value is None:
        return None
    w = tri.witness
    net = nets._net(x) if y is None else nets.sub(nets._net(x), nets._net(y))
    if claim == "moderate":
        if tri.value:
            return replay_moderate(net, w.data[1], grid)
        return replay_growth_along(net, w.data[0], 12)
    if claim in ("negligible", "gn_equal"):
        if tri.value:
            return replay_negligible(net, m_max, grid)
        if w.kind == "lower-bound-along":
            seq, q, _ = w.data
            m_star = max(1, math.floor(q) + 1) if q is not None else 12
            return replay_growth_along(net, seq, m_star)
        # eventual lower bound: |x| >= eps**m_star below the threshold
        return replay_lower_eventual(net, w.data[1], w.data[2], grid)
    if claim == "strictly-nonzero":
        if tri.value:
            return replay_lower_eventual(net, w.data[1], w.data[2], grid)
        return replay_small_along(net, w.data[0], m_max)
    if claim == "leq":
        if tri.value:
            return replay_leq(x, y, w.data, grid)
        return replay_order_violation(x, y, w.data[0], w.data[1], grid)
    raise ValueError(f"unknown claim {claim!r}")


# --------------------------------------------------------------------------
# log-log regression
# --------------------------------------------------------------------------

def estimate_valuation(x, grid: GridSpec = DEFAULT_GRID) -> Tuple[float, float]:
    """Least-squares slope of log|x| vs log eps (with standard error)
    over grid points where the value is finite and nonzero."""
    net = nets._net(x)
    ts, vs = [], []
    for e in grid.points():
        v = _abs_at(net, float(e))
        if 0.0 < v < math.inf:
            ts.append(math.log(float(e)))
            vs.append(math.log(v))
    if len(ts) < 8:
        return (math.nan, math.inf)
    t = np.array(ts)
    v = np.array(vs)
    n = len(t)
    tbar = t.mean()
    sxx = float(((t - tbar) ** 2).sum())
    slope = float(((t - tbar) * (v - v.mean())).sum() / sxx)
    icept = float(v.mean() - slope * tbar)
    res = v - (slope * t + icept)
    se = math.sqrt(float((res ** 2).sum()) / max(1, n - 2) / sxx)
    return (slope, se)


# --------------------------------------------------------------------------
# seeded random nets
# --------------------------------------------------------------------------

_LEAF_CONSTS = [-3.0, -2.0, -1.0, -0.5, 0.5, 1.0, 1.5, 2.0, 3.0]
_OSC_POWERS = [F(1), F(2), F(1, 2)]


def random_net(seed: int, tier: Tier = Tier.Smooth, depth: int = 3) -> NetExpr:
    """Deterministic tier-admissible random tree of depth <= depth.

    Distribution: leaves are constants, eps, oscillators and exp(-1/eps);
    interior nodes are ring operations, powers of eps, bump trains, and
    (per tier) abs/min/max/root or indicator/spike nodes.
    """
    rng = random.Random(f"gnum-random-net|{seed}|{int(tier)}|{depth}")
    return _gen(rng, tier, depth)


def _leaf(rng: random.Random, tier: Tier) -> NetExpr:
    k = rng.randrange(9)
    if k == 0:
        return nets.Const(rng.choice(_LEAF_CONSTS))
    if k in (1, 2):
        return nets.EPS
    if k == 3:
        return nets.SinRecipPow(rng.choice(_OSC_POWERS))
    if k == 4:
        return nets.CosRecipPow(rng.choice(_OSC_POWERS))
    if k == 5:
        return nets.ExpNegRecip()
    if k == 6:
        return nets.PowQ(nets.EPS, F(rng.choice([-3, -2, -1, 2, 3])))
    if k == 7:
        return nets.powq(nets.ExpNegRecip(), F(rng.choice([-1, 2])))
    return nets.PowQ(nets.EPS, F(rng.choice([1, 3]), 2))


def _schedule(rng: random.Random) -> SequenceRule:
    if rng.random() < 0.5:
        return Geometric(F(1, rng.choice([2, 3])))
    return Harmonic()


def _gen(rng: random.Random, tier: Tier, depth: int) -> NetExpr:
    if depth <= 0:
        return _leaf(rng, tier)
    hi = 12
    if tier >= Tier.Continuous:
        hi = 16
    if tier >= Tier.Arbitrary:
        hi = 18
    k = rng.randrange(hi)
    if k in (0, 1, 2):
        return nets.add(_gen(rng, tier, depth - 1), _gen(rng, tier, depth - 1))
    if k in (3, 4, 5):
        return nets.mul(_gen(rng, tier, depth - 1), _gen(rng, tier, depth - 1))
    if k == 6:
        return nets.neg(_gen(rng, tier, depth - 1))
    if k == 7:
        return nets.PowQ(nets.EPS, F(rng.choice([-3, -2, -1, 2, 3])))
    if k == 8:
        h = nets.ConstHeights(1.0) if rng.random() < 0.5 \
            else nets.DecayHeights(F(1), F(0))
        return nets.bump_train(_schedule(rng), heights=h)
    if k == 9:
        return nets.mul(nets.Const(rng.choice(_LEAF_CONSTS)),
                        _gen(rng, tier, depth - 1))
    if k in (10, 11):
        return _leaf(rng, tier)
    if k == 12:
        return nets.AbsNode(_gen(rng, tier, depth - 1))
    if k == 13:
        return nets.minn(_gen(rng, tier, depth - 1),
                         _gen(rng, tier, depth - 1))
    if k == 14:
        return nets.maxn(_gen(rng, tier, depth - 1),
                         _gen(rng, tier, depth - 1))
    if k == 15:
        return nets.RootN(nets.AbsNode(_gen(rng, tier, depth - 1)),
                          rng.choice([2, 3]))
    if k == 16:
        return nets.Indicator(_schedule(rng))
    return nets.SpikeTrain(Harmonic())
