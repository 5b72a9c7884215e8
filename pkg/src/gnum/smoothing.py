"""Constructive smoothing: continuous-tier nets to smooth-tier nets
within an exp(-1/eps) envelope, and the spike-net refuter.

The smoothing operator realizes the inverse of the smooth-to-continuous
inclusion on scalar nets.  The output is a partition-of-unity blend of
*constant* sample values of the input: on each dyadic band
[2^-b-1, 2^-b] the band is split uniformly into 2^L subintervals, one
reference bump and one sample per subinterval, with L chosen from a
certified modulus-of-continuity bound so that the sample spacing keeps
|blend - input| below min(bound, exp(-1/eps)) on the whole band.

Where the required width falls below the floating-point resolution of
the band (the envelope shrinks much faster than double precision can
follow), the true construction's subintervals are narrower than one
representable number apart; the evaluator then returns the input's value
at eps itself, which is the blend's value to all 53 bits.  Bands whose
modulus had to be estimated numerically are refined by doubling (cap 20)
and flagged in the report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Tuple

from . import nets
from .errors import PreconditionError, SearchExhausted, TierError
from .nets import (AbsNode, Add, BumpTrain, Const, CosRecipPow, Eps,
                   ExpNegRecip, GNumber, Inv, MaxNode, MinNode, Mul, Neg,
                   NetExpr, PHI_MAX_SLOPE, PowQ, RootN, SinRecipPow,
                   SmoothBlend, SpikeTrain, Tier, bump_phi, eval_net,
                   minimal_tier, nonneg_net)
from .sequences import Harmonic

LOG_ULP = math.log(2.0 ** -52)
_EXACT = ("exact", 0.0)


# --------------------------------------------------------------------------
# per-band bounds: sup, inf, modulus of continuity
# --------------------------------------------------------------------------

def _numeric_sup(net: NetExpr, a: float, b: float, n: int = 65) -> float:
    vals = []
    for i in range(n):
        e = a + (b - a) * i / (n - 1)
        if 0 < e <= 1:
            vals.append(abs(eval_net(net, e)))
    return max(vals) * 1.5 if vals else 1.0


def band_sup(net: NetExpr, a: float, b: float) -> float:
    """Upper bound for |net| on [a, b] (analytic where possible)."""
    if isinstance(net, Const):
        return abs(net.c)
    if isinstance(net, Eps):
        return b
    if isinstance(net, ExpNegRecip):
        return math.exp(-1.0 / b)
    if isinstance(net, (SinRecipPow, CosRecipPow)):
        return 1.0
    if isinstance(net, Neg):
        return band_sup(net.x, a, b)
    if isinstance(net, AbsNode):
        return band_sup(net.x, a, b)
    if isinstance(net, Add):
        return band_sup(net.l, a, b) + band_sup(net.r, a, b)
    if isinstance(net, Mul):
        return band_sup(net.l, a, b) * band_sup(net.r, a, b)
    if isinstance(net, (MinNode, MaxNode)):
        return max(band_sup(net.l, a, b), band_sup(net.r, a, b))
    if isinstance(net, PowQ):
        q = float(net.q)
        if isinstance(net.base, Eps):
            return max(a ** q, b ** q)
        s = band_sup(net.base, a, b)
        if q >= 0:
            return s ** q
        i = band_inf(net.base, a, b)
        return i ** q if i > 0 else math.inf
    if isinstance(net, RootN):
        return band_sup(net.x, a, b) ** (1.0 / net.n)
    if isinstance(net, Inv):
        i = band_inf(net.x, a, b)
        return 1.0 / i if i > 0 else math.inf
    if isinstance(net, BumpTrain):
        lo = net.schedule.index_near(b)
        hi = net.schedule.index_near(a)
        out = 0.0
        for j in range(max(1, lo - 2), hi + 3):
            out = max(out, abs(net.heights.value(net.schedule, j)))
        return out
    return _numeric_sup(net, a, b)


def band_inf(net: NetExpr, a: float, b: float) -> float:
    """Lower bound for |net| on [a, b]; 0.0 when none is certified."""
    if isinstance(net, Const):
        return abs(net.c)
    if isinstance(net, Eps):
        return a
    if isinstance(net, ExpNegRecip):
        return math.exp(-1.0 / a)
    if isinstance(net, Neg):
        return band_inf(net.x, a, b)
    if isinstance(net, AbsNode):
        return band_inf(net.x, a, b)
    if isinstance(net, Mul):
        return band_inf(net.l, a, b) * band_inf(net.r, a, b)
    if isinstance(net, Inv):
        s = band_sup(net.x, a, b)
        return 1.0 / s if s < math.inf else 0.0
    if isinstance(net, PowQ):
        q = float(net.q)
        if isinstance(net.base, Eps):
            return min(a ** q, b ** q)
        i = band_inf(net.base, a, b)
        if q >= 0:
            return i ** q
        s = band_sup(net.base, a, b)
        return s ** q if 0 < s < math.inf else 0.0
    if isinstance(net, Add):
        if nonneg_net(net.l) and nonneg_net(net.r):
            return band_inf(net.l, a, b) + band_inf(net.r, a, b)
        return 0.0
    return 0.0


Modulus = List[Tuple[float, int]]  # M(d) = sum K * d**(1/r)


def _mod_scale(m: Modulus, c: float) -> Modulus:
    return [(k * c, r) for k, r in m]


def _mod_add(m1: Modulus, m2: Modulus) -> Modulus:
    merged = {}
    for k, r in m1 + m2:
        merged[r] = merged.get(r, 0.0) + k
    return [(k, r) for r, k in sorted(merged.items())]


def _mod_root(m: Modulus, n: int) -> Modulus:
    # (sum K d^(1/r))^(1/n) <= sum K^(1/n) d^(1/(r n)) for d <= 1 terms
    return [(k ** (1.0 / n), r * n) for k, r in m]


def band_modulus(net: NetExpr, a: float, b: float) -> Optional[Modulus]:
    """Certified modulus bound |net(s)-net(t)| <= M(|s-t|) on [a, b];
    None when only a numeric estimate is available."""
    if isinstance(net, Const):
        return []
    if isinstance(net, Eps):
        return [(1.0, 1)]
    if isinstance(net, ExpNegRecip):
        return [(math.exp(-1.0 / b) / (a * a), 1)]
    if isinstance(net, (SinRecipPow, CosRecipPow)):
        p = float(net.p)
        return [(p * a ** (-p - 1.0), 1)]
    if isinstance(net, (Neg, AbsNode)):
        return band_modulus(net.x, a, b)
    if isinstance(net, Add):
        m1, m2 = band_modulus(net.l, a, b), band_modulus(net.r, a, b)
        if m1 is None or m2 is None:
            return None
        return _mod_add(m1, m2)
    if isinstance(net, (MinNode, MaxNode)):
        m1, m2 = band_modulus(net.l, a, b), band_modulus(net.r, a, b)
        if m1 is None or m2 is None:
            return None
        return _mod_add(m1, m2)
    if isinstance(net, Mul):
        m1, m2 = band_modulus(net.l, a, b), band_modulus(net.r, a, b)
        if m1 is None or m2 is None:
            return None
        s1, s2 = band_sup(net.l, a, b), band_sup(net.r, a, b)
        if not (math.isfinite(s1) and math.isfinite(s2)):
            return None
        return _mod_add(_mod_scale(m1, s2), _mod_scale(m2, s1))
    if isinstance(net, Inv):
        m = band_modulus(net.x, a, b)
        i = band_inf(net.x, a, b)
        if m is None or i <= 0:
            return None
        return _mod_scale(m, 1.0 / (i * i))
    if isinstance(net, RootN):
        m = band_modulus(net.x, a, b)
        if m is None:
            return None
        return _mod_root(m, net.n)
    if isinstance(net, PowQ):
        q = net.q
        if isinstance(net.base, Eps):
            fq = float(q)
            k = abs(fq) * max(a ** (fq - 1.0), b ** (fq - 1.0))
            return [(k, 1)]
        if q.denominator == 1 and q.numerator >= 1:
            m = band_modulus(net.base, a, b)
            s = band_sup(net.base, a, b)
            if m is None or not math.isfinite(s):
                return None
            n = q.numerator
            return _mod_scale(m, n * max(s, 1e-300) ** (n - 1))
        if q > 0:
            num, den = q.numerator, q.denominator
            inner = band_modulus(PowQ(net.base, Fraction(num)), a, b) \
                if num != 1 else band_modulus(net.base, a, b)
            if inner is None:
                return None
            return _mod_root(inner, den)
        inner = PowQ(net.base, -q)
        m = band_modulus(inner, a, b)
        i = band_inf(inner, a, b)
        if m is None or i <= 0:
            return None
        return _mod_scale(m, 1.0 / (i * i))
    if isinstance(net, BumpTrain):
        lo = net.schedule.index_near(b)
        hi = net.schedule.index_near(a)
        k = 0.0
        for j in range(max(1, lo - 2), hi + 3):
            w = net.widths.value(net.schedule, j)
            h = abs(net.heights.value(net.schedule, j))
            if h == 0.0:
                continue
            if w <= 0.0:
                return None  # sub-float supports: no useful Lipschitz bound
            k = max(k, h * PHI_MAX_SLOPE / w)
        return [(k, 1)]
    return None


def _numeric_modulus(net: NetExpr, a: float, b: float, n: int = 128) -> float:
    """Estimated Lipschitz constant (not certified; flagged by callers)."""
    h = (b - a) / n
    worst = 0.0
    prev = eval_net(net, a) if a > 0 else eval_net(net, b)
    for i in range(1, n + 1):
        e = a + h * i
        if not 0 < e <= 1:
            continue
        v = eval_net(net, e)
        worst = max(worst, abs(v - prev) / h)
        prev = v
    return worst * 4.0 + 1e-12


# --------------------------------------------------------------------------
# band plans for SmoothBlend evaluation
# --------------------------------------------------------------------------

def _band_bounds(b: int) -> Tuple[float, float]:
    if b <= 0:
        return (0.5, 1.0)
    return (2.0 ** (-b - 1), 2.0 ** (-b))


def _band_of(eps: float) -> int:
    if eps >= 0.5:
        return 0
    b = int(math.floor(-math.log2(eps)))
    while eps < 2.0 ** (-b - 1):
        b += 1
    while eps >= 2.0 ** (-b):
        b -= 1
    return max(0, b)


@lru_cache(maxsize=None)
def _band_plan(blend: SmoothBlend, b: int):
    """('exact', 0.0) or ('real', width) for band b, plus a flag note."""
    a, hi = _band_bounds(b)
    src = blend.source
    wa, wb = a * 0.5, min(1.0, hi * 2.0)
    sup = band_sup(src, wa, wb)
    if not math.isfinite(sup):
        return ("exact", 0.0, "")
    # pointwise target: min(bound, exp(-1/eps)); evaluated at the band's
    # left end where it is smallest (both defaults increase with eps)
    log_env = -1.0 / a
    if not isinstance(blend.bound, ExpNegRecip):
        vals = [eval_net(blend.bound, e) for e in (a, 0.5 * (a + hi), hi)]
        mv = min(vals)
        if mv <= 0.0:
            return ("exact", 0.0, "")
        log_env = min(log_env, math.log(mv))
    if log_env < math.log(3e-13 * max(1.0, sup)):
        return ("exact", 0.0, "")
    mod = band_modulus(src, wa, wb)
    flag = ""
    if mod is None:
        mod = [(_numeric_modulus(src, max(wa, 1e-9), wb), 1)]
        flag = "estimated-modulus"
    mod = [(max(k, 1e-300), r) for k, r in mod] or [(1e-300, 1)]
    nterms = len(mod)
    log_w = min(r * (log_env - math.log(blend.safety * nterms * k))
                for k, r in mod) - math.log(4.0)
    if log_w < LOG_ULP + math.log(a):
        return ("exact", 0.0, flag)
    levels = max(0, math.ceil(math.log2((hi - a) / math.exp(log_w))))
    w = (hi - a) / 2.0 ** levels
    if flag:
        # estimated modulus: verify against the envelope, refine by
        # doubling with a hard cap, flag the band on failure
        env = math.exp(log_env)
        for _ in range(20):
            if _band_ok(blend, b, w, env):
                break
            w *= 0.5
            levels += 1
            if w < math.exp(LOG_ULP + math.log(a)):
                return ("exact", 0.0, flag)
        else:
            flag = "refinement-cap"
    return ("real", w, flag)


def _band_ok(blend: SmoothBlend, b: int, w: float, env: float) -> bool:
    a, hi = _band_bounds(b)
    n = 48
    for i in range(n + 1):
        e = a + (hi - a) * i / n
        if not 0 < e <= 1:
            continue
        out = _blend_value(blend, e, w)
        if abs(out - eval_net(blend.source, e)) > 0.5 * env:
            return False
    return True


def _band_bumps(blend: SmoothBlend, b: int, eps: float):
    """(center, psi) pairs from band b's bump family active at eps."""
    plan = _band_plan(blend, b)
    if plan[0] != "real":
        return []
    a, hi = _band_bounds(b)
    w = plan[1]
    count = round((hi - a) / w)
    k = int(math.floor((eps - a) / w))
    out = []
    for i in (k - 1, k, k + 1):
        if not 0 <= i < count:
            continue
        c = a + (i + 0.5) * w
        t = (eps - c) / w
        if -1.0 < t < 1.0:
            p = bump_phi(t)
            if p > 0.0:
                out.append((c, p))
    return out


def _blend_value(blend: SmoothBlend, eps: float, w_override=None) -> complex:
    b = _band_of(eps)
    if w_override is None:
        plan = _band_plan(blend, b)
        if plan[0] == "exact":
            return eval_net(blend.source, eps)
        pairs = _band_bumps(blend, b, eps)
        for nb in (b - 1, b + 1):
            if nb >= 0:
                pairs += _band_bumps(blend, nb, eps)
    else:
        a, hi = _band_bounds(b)
        count = round((hi - a) / w_override)
        k = int(math.floor((eps - a) / w_override))
        pairs = []
        for i in (k - 1, k, k + 1):
            if 0 <= i < count:
                c = a + (i + 0.5) * w_override
                t = (eps - c) / w_override
                if -1.0 < t < 1.0:
                    pairs.append((c, bump_phi(t)))
    if not pairs:
        return eval_net(blend.source, eps)
    total = sum(p for _, p in pairs)
    if total <= 0.0:
        return eval_net(blend.source, eps)
    out = 0.0
    for c, p in pairs:
        out += (p / total) * eval_net(blend.source, min(c, 1.0))
    return out


def eval_smooth_blend(blend: SmoothBlend, eps: float):
    return _blend_value(blend, eps)


# --------------------------------------------------------------------------
# the smoothing operator
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SmoothingReport:
    output: GNumber
    bound: NetExpr
    grid_max_ratio: float
    flagged_bands: Tuple[Tuple[int, str], ...] = ()
    shortcut: bool = False


def _presimplify(net: NetExpr) -> NetExpr:
    """Remove redundant continuous-only nodes (|x| = x for nonneg x, ...)."""
    if isinstance(net, AbsNode):
        inner = _presimplify(net.x)
        if isinstance(inner, Neg):
            inner = inner.x
        if nonneg_net(inner):
            return inner
        if isinstance(inner, Const):
            return Const(abs(inner.c))
        return AbsNode(inner)
    if isinstance(net, (MinNode, MaxNode)):
        l, r = _presimplify(net.l), _presimplify(net.r)
        if l == r:
            return l
        return type(net)(l, r)
    if isinstance(net, Add):
        return Add(_presimplify(net.l), _presimplify(net.r))
    if isinstance(net, Mul):
        return Mul(_presimplify(net.l), _presimplify(net.r))
    if isinstance(net, Neg):
        return Neg(_presimplify(net.x))
    return net


def smooth_approximate(x, bound: Optional[NetExpr] = None,
                       grid=None, safety: int = 8) -> SmoothingReport:
    """Smooth representative of a continuous-tier net within
    min(bound, exp(-1/eps)) pointwise.

    Already-smooth inputs are returned unchanged.  The output is
    structurally smooth: a partition-of-unity blend of constant samples,
    free of abs/min/max/root nodes.
    """
    from .harness import DEFAULT_GRID
    net = x.net if isinstance(x, GNumber) else nets._net(x)
    bound = bound if bound is not None else ExpNegRecip()
    if minimal_tier(net) >= Tier.Arbitrary:
        raise TierError("smoothing is defined on continuous-tier nets; "
                        "spike/indicator nets have no continuous representative")
    simplified = _presimplify(net)
    if minimal_tier(simplified) == Tier.Smooth:
        return SmoothingReport(GNumber(simplified, Tier.Smooth), bound,
                               0.0, (), shortcut=True)
    blend = SmoothBlend(simplified, bound, safety)
    grid = grid or DEFAULT_GRID
    worst = 0.0
    flags = []
    seen = set()
    for e in grid.points():
        e = float(e)
        b = _band_of(e)
        if b not in seen:
            seen.add(b)
            plan = _band_plan(blend, b)
            if plan[2]:
                flags.append((b, plan[2]))
        diff = abs(eval_net(blend, e) - eval_net(net, e))
        if diff == 0.0:
            continue
        bv = eval_net(bound, e)
        ratio = diff / bv if bv > 0.0 else math.inf
        worst = max(worst, ratio)
    return SmoothingReport(GNumber(blend, Tier.Smooth), bound, worst,
                           tuple(flags))


# --------------------------------------------------------------------------
# the non-surjectivity refuter
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RefutationWitness:
    """Evidence that a continuous candidate misses the harmonic spike net.

    kind 'spike-miss':   |candidate(1/n) - 1| >= 1/4 at eps = 1/n
    kind 'midpoint-miss':|candidate(mid_n)| >= 1/4 at the midpoint
    kind 'crossing':     bisection point with ||candidate| - 1/2| <= 1e-9
    """

    kind: str
    n: int
    eps: float
    value: complex


def refute_continuous_representative(target, candidate,
                                     max_spikes: int = 64) -> RefutationWitness:
    """Witness that |candidate - target| is not negligible, for target
    the spike net with value 1 at eps = 1/n."""
    tnet = target.net if isinstance(target, GNumber) else nets._net(target)
    cnet = candidate.net if isinstance(candidate, GNumber) else nets._net(candidate)
    if not isinstance(tnet, SpikeTrain) or not isinstance(tnet.s, Harmonic):
        raise PreconditionError("target must be the harmonic spike net")
    if minimal_tier(cnet) >= Tier.Arbitrary:
        raise PreconditionError("candidate must be continuous-tier")
    for n in range(1, max_spikes + 1):
        sp = 1.0 / n
        v1 = eval_net(cnet, sp)
        if abs(v1 - 1.0) >= 0.25:
            return RefutationWitness("spike-miss", n, sp, v1)
        mid = (2 * n + 1) / (2 * n * (n + 1))
        v2 = eval_net(cnet, mid)
        if abs(v2) >= 0.25:
            return RefutationWitness("midpoint-miss", n, mid, v2)
        # |candidate| > 3/4 at the spike, < 1/4 at the midpoint: the
        # intermediate value theorem forces a |.| = 1/2 crossing between
        lo, hi = mid, sp
        glo = abs(eval_net(cnet, lo)) - 0.5
        for _ in range(200):
            m = 0.5 * (lo + hi)
            gm = abs(eval_net(cnet, m)) - 0.5
            if abs(gm) <= 1e-9:
                return RefutationWitness("crossing", n, m, eval_net(cnet, m))
            if (gm < 0) == (glo < 0):
                lo, glo = m, gm
            else:
                hi = m
        m = 0.5 * (lo + hi)
        if abs(abs(eval_net(cnet, m)) - 0.5) <= 1e-6:
            return RefutationWitness("crossing", n, m, eval_net(cnet, m))
    raise SearchExhausted(
        f"no refutation witness within the first {max_spikes} spikes",
        detail={"max_spikes": max_spikes})
