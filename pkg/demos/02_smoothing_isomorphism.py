"""The smooth/continuous isomorphism, constructively.

Every continuous-tier net has a smooth representative within
exp(-1/eps): a partition-of-unity blend of constant samples whose
per-band sample spacing is chosen from a certified modulus of
continuity.  The converse fails one tier up: no continuous net tracks
the harmonic spike net, and the refuter produces the intermediate-value
witness from the classical argument.
"""

import math

from gnum import (GridSpec, gn_equal, gnumber, refute_continuous_representative,
                  smooth_approximate)
from gnum.nets import (EPS, absn, bump_train, const, eval_net, minn,
                       sin_recip, spikes)
from gnum.nets import AbsNode, MinNode, MaxNode, RootN, iter_nodes
from gnum.sequences import Harmonic

grid = GridSpec(n_points=1000, eps_min=1e-6)

# -- smoothing |sin(1/eps)| ---------------------------------------------------

x = absn(sin_recip(1))
report = smooth_approximate(gnumber(x), grid=grid)
out = report.output.net

print("output tier:", report.output.tier)
print("max |out - in| / exp(-1/eps) over the grid:", report.grid_max_ratio)
print("continuous-only nodes left in the output:",
      sum(isinstance(n, (AbsNode, MinNode, MaxNode, RootN))
          for n in iter_nodes(out)))
print("same generalized number:", gn_equal(out, x))

# the envelope is brutal at small eps: the blend must agree with the
# input to the last bit once exp(-1/eps) dips below float resolution
for e in (0.5, 0.1, 0.02, 1e-4):
    diff = abs(eval_net(out, e) - eval_net(x, e))
    print(f"  eps = {e:<8g} |out - in| = {diff:.3e}  envelope = "
          f"{math.exp(-1 / e):.3e}")

# already-smooth inputs short-circuit
print("\nsmooth input shortcut:", smooth_approximate(gnumber(EPS)).shortcut)

# min(eps, 1/2) is continuous with a kink; the blend rounds it off
report2 = smooth_approximate(gnumber(minn(EPS, const(0.5))), grid=grid)
print("min(eps, 1/2) ratio:", report2.grid_max_ratio)

# -- why the continuous tier is a proper subring of the arbitrary one ---------

target = gnumber(spikes(Harmonic()))     # 1 exactly at eps = 1/n

for cand, label in [(const(0), "the zero net"),
                    (const(1), "the constant one"),
                    (bump_train(Harmonic()), "a bump train riding the spikes")]:
    w = refute_continuous_representative(target, gnumber(cand))
    print(f"candidate {label:32s} -> witness {w.kind} at eps = {w.eps:.9g}"
          f" (value {abs(w.value):.6g})")
