"""Ring-structure witnesses: every existence proof as an executable
construction whose defining inequalities replay on a grid.
"""

from fractions import Fraction as F

from gnum import (EPS, GridSpec, annihilator_split, characteristic_set,
                  construct_zero_divisor, gelfand_witnesses, gn_equal,
                  idempotent_classify, interleaved_trains, invertible_wrt,
                  replay_negligible, restriction_zero)
from gnum.nets import (ExpNegRecip, add, const, cos_recip, eval_net, gnumber,
                       indicator, mul, sin_recip, sub)
from gnum.sequences import Geometric, PiSequence

grid = GridSpec(n_points=600, eps_min=1e-6)
pts = [float(e) for e in grid.points()]

# -- idempotents: only 0 and 1 in the smooth/continuous tiers -----------------

print("u = 1 + exp(-1/eps):",
      idempotent_classify(gnumber(add(const(1), ExpNegRecip()))).verdict)
print("u = eps:            ", idempotent_classify(gnumber(EPS)).verdict)
print("u = e_S (arbitrary):",
      idempotent_classify(gnumber(indicator(Geometric(F(1, 2))))).verdict)

# -- non-invertible  <=>  zero divisor ----------------------------------------

r = sin_recip(1)
zd = construct_zero_divisor(gnumber(r))
print("\nzero divisor for sin(1/eps): unit bumps at eps_j = 1/(j*pi)")
print("  s(eps_j) values:", sorted({v for _, v in zd.unit_points}))
print("  r*s negligible (replay m<=12):",
      replay_negligible(mul(r, zd.s.net), 12, grid).passed)
print("  r*s = 0 in the ring:", gn_equal(mul(r, zd.s.net), const(0)))

# -- the Gelfand property ------------------------------------------------------

a = mul(sin_recip(1), sin_recip(1))
b = mul(cos_recip(1), cos_recip(1))      # a + b = 1 pointwise
gw = gelfand_witnesses(gnumber(a), gnumber(b))
worst = max(abs(eval_net(gw.product_net(), e)) for e in pts)
print("\nGelfand pair for (sin^2, cos^2): max |(1+ar)(1+bs)| =", worst)

# -- normality: Ann(r) + Ann(s) is everything when rs = 0 ----------------------

u, v = interleaved_trains(F(1, 4))
split = annihilator_split(u, v)
x = split.x.net
tail = [e for e in pts if e <= 1e-2]
w1 = max(abs(eval_net(mul(u.net, x), e)) ** 2 / (2 * e ** 10) for e in tail)
w2 = max(abs(eval_net(mul(v.net, sub(const(1), x)), e)) ** 2 / (2 * e ** 10)
         for e in tail)
print("\nannihilator split for interleaved trains:")
print("  max |r x|^2 / 2 eps^10   on the tail:", w1)
print("  max |s(1-x)|^2 / 2 eps^10 on the tail:", w2)

# -- characteristic sets --------------------------------------------------------

cs = characteristic_set(u, v, n_points=8)
print("\ncharacteristic set points (|r| = |s| below the bound schedule):")
for j, q in zip(range(1, 9), cs.order_schedule):
    p = cs.points.value(j)
    print(f"  eps_{j} = {p:.6g}   bound eps^{q} = {p ** float(q):.3g}")

# restriction and invertibility along sequences
zeros = PiSequence(F(1), F(0), F(1))          # 1/(k*pi)
ones = PiSequence(F(2), F(1, 2), F(1))        # sin = +1 there
print("\nsin restricted to its zeros vanishes:",
      restriction_zero(gnumber(sin_recip(1)), zeros))
print("sin invertible along the extremum set:",
      invertible_wrt(gnumber(sin_recip(1)), ones))
