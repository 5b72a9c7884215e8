"""Order-lattice operations: absolute value, min, max, and the
convexity/absolute-convexity factor constructions.

The lattice operations build a continuous representative (abs/min/max of
a smooth net is only continuous) and, mirroring the definition of the
absolute value through the smooth-continuous isomorphism, re-smooth it
back into the smooth tier on request.  By default results of smooth
inputs are re-smoothed and results of continuous inputs stay continuous;
``resmooth=False`` keeps the pointwise-exact continuous representative,
which is what the identity tests evaluate before smoothing blurs them by
at most exp(-1/eps).
"""

from __future__ import annotations

from typing import Optional

from . import nets
from .asymptotics import leq
from .errors import PreconditionError
from .nets import (AbsFactor, ExpNegRecip, GNumber, Tier, absn, gnumber,
                   maxn, minimal_tier, minn, nonneg_net)
from .smoothing import _presimplify, smooth_approximate


def _gn(x) -> GNumber:
    return x if isinstance(x, GNumber) else gnumber(nets._net(x))


def _finish(net, in_tier: Tier, resmooth: Optional[bool]) -> GNumber:
    simplified = _presimplify(net)
    mt = minimal_tier(simplified)
    do_smooth = (in_tier == Tier.Smooth) if resmooth is None else resmooth
    if do_smooth and mt > Tier.Smooth:
        # the output net does not depend on the report grid; a coarse one
        # keeps lattice-level re-smoothing cheap
        from .harness import GridSpec
        return smooth_approximate(simplified,
                                  grid=GridSpec(n_points=160,
                                                eps_min=1e-5)).output
    return GNumber(simplified, mt)


def gabs(x, resmooth: Optional[bool] = None) -> GNumber:
    """|x| as a generalized number.

    The continuous representative is (|x_eps|)_eps; smooth inputs are
    re-smoothed so the result stays in the smooth tier (the isomorphism
    route), unless ``resmooth=False`` forces the continuous one.
    """
    gx = _gn(x)
    return _finish(absn(gx.net), gx.tier, resmooth)


def gmin(x, y, resmooth: Optional[bool] = None) -> GNumber:
    """Pointwise minimum of real generalized numbers."""
    gx, gy = _gn(x), _gn(y)
    return _finish(minn(gx.net, gy.net), max(gx.tier, gy.tier), resmooth)


def gmax(x, y, resmooth: Optional[bool] = None) -> GNumber:
    """Pointwise maximum of real generalized numbers."""
    gx, gy = _gn(x), _gn(y)
    return _finish(maxn(gx.net, gy.net), max(gx.tier, gy.tier), resmooth)


def abs_factor(x) -> GNumber:
    """A factor a with a*x = |x| up to negligibility and |a| <= 2
    everywhere, built from the eps^m/|x| patch schedule blended over the
    cover {(1/(m+1), 1/(m-1))}."""
    gx = _gn(x)
    return GNumber(AbsFactor(gx.net), max(Tier.Continuous, gx.tier))


def convex_factor(x, y) -> GNumber:
    """For 0 <= y <= x, a factor a with 0 < a_eps <= 1 pointwise and
    a*x = y up to negligibility.

    Representatives are normalized as in the convexity proof: absolute
    values plus the negligible regularizer exp(-1/eps), with the
    denominator lifted to max(|x|, |y|) so the quotient stays in (0, 1].
    """
    gx, gy = _gn(x), _gn(y)
    t1 = leq(nets.const(0.0), gy.net)
    t2 = leq(gy.net, gx.net)
    if not (t1.is_true and t2.is_true):
        raise PreconditionError(
            f"convex_factor needs 0 <= y <= x decided True; got {t1}, {t2}")
    ax = gx.net if nonneg_net(gx.net) else absn(gx.net)
    ay = gy.net if nonneg_net(gy.net) else absn(gy.net)
    delta = ExpNegRecip()
    num = nets.add(ay, delta)
    den = nets.add(maxn(ax, ay), delta)
    a = nets.mul(num, nets.inv(den))
    return GNumber(a, max(Tier.Continuous, gx.tier, gy.tier))
