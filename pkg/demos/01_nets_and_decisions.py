"""Nets, tiers, and the asymptotic decision procedures.

A generalized number is an eps-parametrized net on (0,1] taken modulo
negligibility.  Nets here are closed expression trees, so the decision
procedures can pattern-match them and answer exactly on a large
fragment; outside it they answer Unknown rather than guessing.
"""

from fractions import Fraction as F

from gnum import (EPS, GridSpec, Tier, gn_equal, gnumber, is_moderate,
                  is_negligible, is_strictly_nonzero, leq, tier_relax,
                  valuation, verify_decision)
from gnum.nets import (ExpNegRecip, absn, add, const, eval_net, inv, mul,
                       powq, sin_recip, spikes)
from gnum.sequences import Harmonic

# -- building and evaluating nets -------------------------------------------

eps = EPS                                # the identity net
osc = sin_recip(1)                       # sin(1/eps)
tiny = ExpNegRecip()                     # exp(-1/eps), negligible but nonzero
blowup = inv(tiny)                       # exp(+1/eps), not even moderate

print("sin(1/eps) at eps = 2/pi:", eval_net(osc, 2 / 3.141592653589793))
print("exp(-1/eps) at eps = 1:  ", eval_net(tiny, 1.0))

# the spike net of the non-surjectivity demonstration: 1 exactly at 1/n
spike = spikes(Harmonic())
print("spikes at 1/3 and 0.4:   ", eval_net(spike, 1 / 3), eval_net(spike, 0.4))

# -- tiers -------------------------------------------------------------------

x = gnumber(absn(osc))                   # |sin(1/eps)| is continuous-tier
print("\n|sin(1/eps)| lives in tier:", x.tier)
print("relaxed to arbitrary:      ", tier_relax(x, Tier.Arbitrary).tier)

# -- decisions with replayable witnesses --------------------------------------

grid = GridSpec(n_points=400, eps_min=1e-6)

for name, net in [("eps^-5", powq(eps, -5)), ("sin(1/eps)", osc),
                  ("exp(+1/eps)", blowup)]:
    t = is_moderate(net)
    rep = verify_decision("moderate", t, net, grid=grid)
    print(f"moderate({name}) = {t}   replay: {rep.passed}")

for name, net in [("exp(-1/eps)", tiny), ("eps^3", powq(eps, 3))]:
    t = is_negligible(net)
    print(f"negligible({name}) = {t}")

print("strictly nonzero eps:", is_strictly_nonzero(eps))
print("strictly nonzero sin(1/eps):", is_strictly_nonzero(osc),
      " (vanishes at eps = 1/(k*pi))")

# equality modulo negligibility: adding exp(-1/eps) does not change the class
print("\neps == eps + exp(-1/eps):", gn_equal(eps, add(eps, tiny)))
print("eps == eps^2:            ", gn_equal(eps, powq(eps, 2)))

# the partial order r <= s: for every a > 0 eventually r <= s + eps^a
print("0 <= eps:                ", leq(const(0), eps))
print("sin(1/eps) <= 1:         ", leq(osc, const(1)))
print("eps <= eps^2:            ", leq(eps, powq(eps, 2)))

# sharp exponents on the power/exp fragment
print("\nvaluation(eps^(3/2))       =", valuation(powq(eps, F(3, 2))))
print("valuation(eps^-1 * eps^2)  =", valuation(mul(powq(eps, -1),
                                                    powq(eps, 2))))
print("valuation(exp(-1/eps))     =", valuation(tiny))
