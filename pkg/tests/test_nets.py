"""Net construction, evaluation, tiers, and structural invariants."""

import math
from fractions import Fraction as F

import pytest

from gnum import nets
from gnum.errors import DomainError, TierError
from gnum.nets import (EPS, AbsNode, Const, DecayHeights, ExpNegRecip,
                       GNumber, Indicator, PartitionOfUnity, SpikeTrain,
                       Tier, absn, add, bump_train, const, cos_recip,
                       eval_net, g_add, g_mul, gnumber, indicator, inv,
                       maxn, minimal_tier, minn, mul, neg, powq, rootn,
                       sin_recip, spikes, sub, tier_relax)
from gnum.harness import GridSpec, random_net
from gnum.sequences import Geometric, Harmonic


GRID = GridSpec(n_points=250, eps_min=1e-6).points()


def test_eval_identity_net():
    assert eval_net(EPS, 0.5) == 0.5


def test_eval_exp_neg_recip():
    assert eval_net(ExpNegRecip(), 1.0) == math.exp(-1.0)


def test_eval_spike_train_harmonic():
    st = spikes(Harmonic())
    assert eval_net(st, 1 / 3) == 1.0
    assert eval_net(st, 0.4) == 0.0
    assert eval_net(st, 1.0) == 1.0


def test_eval_outside_domain_rejected():
    with pytest.raises(DomainError):
        eval_net(EPS, 0.0)
    with pytest.raises(DomainError):
        eval_net(EPS, 1.5)


def test_ring_ops_pointwise_exact():
    # bit-level: eval(add(x,y)) == eval(x) + eval(y), same for mul/neg
    for seed in range(12):
        x = random_net(seed, Tier.Smooth, 3)
        y = random_net(seed + 100, Tier.Smooth, 3)
        for e in GRID[::25]:
            e = float(e)
            assert eval_net(add(x, y), e) == eval_net(x, e) + eval_net(y, e)
            assert eval_net(mul(x, y), e) == eval_net(x, e) * eval_net(y, e)
            assert eval_net(neg(x), e) == -eval_net(x, e)


def test_mul_unit_and_sub_self():
    x = add(sin_recip(1), powq(EPS, -2))
    for e in (0.9, 0.31, 0.011):
        assert eval_net(mul(const(1), x), e) == eval_net(x, e)
        assert eval_net(sub(x, x), e) == 0.0


def test_oscillator_exact_value():
    # sin(1/eps)^2 at eps = 2/pi is sin(pi/2)^2 = 1
    e = 2 / math.pi
    v = eval_net(mul(sin_recip(1), sin_recip(1)), e)
    assert abs(v - 1.0) < 1e-15


def test_partition_of_unity_sums_to_one():
    pou = PartitionOfUnity()
    worst = 0.0
    for e in GridSpec(n_points=1000, eps_min=1e-6).points():
        tot = sum(w for _, w in pou.weights(float(e)))
        worst = max(worst, abs(tot - 1.0))
    assert worst <= 1e-12


def test_bump_supports_disjoint_first_64():
    for sched in (Geometric(F(1, 2)), Geometric(F(1, 3)), Harmonic()):
        bt = bump_train(sched)
        for j in range(1, 64):
            cj, cj1 = sched.value(j), sched.value(j + 1)
            wj = bt.widths.value(sched, j)
            wj1 = bt.widths.value(sched, j + 1)
            assert cj1 + wj1 < cj - wj


def test_bump_center_value_is_height():
    bt = bump_train(Geometric(F(1, 2)), heights=DecayHeights(F(1), F(0)))
    for j in (1, 3, 7):
        c = Geometric(F(1, 2)).value(j)
        assert eval_net(bt, c) == c ** j


def test_inv_requires_nowhere_zero():
    with pytest.raises(DomainError):
        inv(sin_recip(1))
    inv(add(const(2), ExpNegRecip()))  # positive: fine


def test_fractional_power_requires_nonneg():
    with pytest.raises(DomainError):
        powq(sin_recip(1), F(1, 2))
    powq(absn(sin_recip(1)), F(1, 2))


def test_rootn_requires_nonneg():
    with pytest.raises(DomainError):
        rootn(neg(EPS), 2)
    rootn(absn(neg(EPS)), 2)


def test_min_max_require_real():
    with pytest.raises(TypeError):
        minn(const(1j), EPS)
    with pytest.raises(TypeError):
        maxn(EPS, mul(const(1j), EPS))


def test_tier_inference():
    assert minimal_tier(add(powq(EPS, -2), sin_recip(1))) == Tier.Smooth
    assert minimal_tier(absn(sin_recip(1))) == Tier.Continuous
    assert minimal_tier(indicator(Harmonic())) == Tier.Arbitrary
    assert minimal_tier(powq(EPS, F(1, 2))) == Tier.Smooth  # eps positive
    assert minimal_tier(powq(absn(sin_recip(1)), F(1, 2))) == Tier.Continuous


def test_tier_relax_directions():
    x = gnumber(EPS)
    assert x.tier == Tier.Smooth
    y = tier_relax(x, Tier.Continuous)
    assert y.net is x.net and y.tier == Tier.Continuous
    z = tier_relax(tier_relax(x, Tier.Continuous), Tier.Arbitrary)
    assert z == tier_relax(x, Tier.Arbitrary)  # composition = direct relax
    with pytest.raises(TierError):
        tier_relax(gnumber(absn(sin_recip(1))), Tier.Smooth)


def test_gnumber_rejects_understated_tier():
    with pytest.raises(TierError):
        GNumber(indicator(Harmonic()), Tier.Continuous)
    with pytest.raises(TierError):
        GNumber(absn(sin_recip(1)), Tier.Smooth)


def test_ring_ops_take_weakest_tier():
    a = gnumber(EPS)
    b = gnumber(absn(sin_recip(1)))
    assert g_add(a, b).tier == Tier.Continuous
    assert g_mul(a, gnumber(spikes(Harmonic()))).tier == Tier.Arbitrary


def test_indicator_arbitrary_only():
    with pytest.raises(TierError):
        GNumber(Indicator(Harmonic()), Tier.Smooth)
    with pytest.raises(TierError):
        GNumber(SpikeTrain(Harmonic()), Tier.Continuous)


def test_eval_deterministic():
    x = random_net(7, Tier.Continuous, 4)
    vals1 = [eval_net(x, float(e)) for e in GRID[::10]]
    vals2 = [eval_net(x, float(e)) for e in GRID[::10]]
    assert vals1 == vals2


def test_complex_constants():
    x = mul(const(1j), EPS)
    v = eval_net(x, 0.25)
    assert v == 0.25j
    assert not nets.is_real_net(x)
    assert eval_net(absn(x), 0.25) == 0.25
