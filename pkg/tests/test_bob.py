import math
from fractions import Fraction

import numpy as np
import pytest

from guessgame import alice as A
from guessgame import analysis, sim
from guessgame import bob as B
from guessgame.core import Constant, InvalidPair, RngStream, StepThreshold

HALF = Fraction(1, 2)


def mc_within(bob, F, p, N=10**6, seed=0, z=3.0):
    est = sim.estimate(bob, F, N, seed)
    return abs(est.point - p) <= z * math.sqrt(p * (1 - p) / N) + 1e-15, est.point


def test_pure_pair_shows_each_number_half_the_time():
    bob = B.pure_pair(7, 8)
    assert sorted((s, p) for s, _, p in bob.outcomes) == [(7, HALF), (8, HALF)]
    shown, hidden = bob.sample(RngStream(1), 200_000)
    assert set(np.unique(shown)) == {7, 8}
    assert abs(np.mean(shown == 8) - 0.5) < 4 * math.sqrt(0.25 / 200_000)
    assert analysis.win_prob_vs_discrete(StepThreshold(7.5), bob) == 1
    assert analysis.win_prob_vs_discrete(A.blind(HALF), bob) == HALF


def test_pure_pair_rejects_bad_order():
    with pytest.raises(InvalidPair):
        B.pure_pair(2, 1)


def test_consecutive_uniform_m1_is_pair_12():
    assert B.consecutive_uniform(1).pairs == B.pure_pair(1, 2).pairs


def test_consecutive_uniform_marginals_and_pi():
    rep = analysis.best_response(B.consecutive_uniform(3))
    assert rep.marginal == {1: Fraction(1, 6), 2: Fraction(1, 3), 3: Fraction(1, 3), 4: Fraction(1, 6)}
    assert rep.pi_table == {1: 0, 2: HALF, 3: HALF, 4: 1}


def test_scaled_consecutive_k1_is_consecutive_uniform():
    F = A.random_threshold(A.ThresholdDistribution.logistic(3, 2))
    a = analysis.win_prob_vs_discrete(F, B.scaled_consecutive(6, 1))
    b = analysis.win_prob_vs_discrete(F, B.consecutive_uniform(6))
    assert a == b


def test_scaled_consecutive_gap_and_value():
    bob = B.scaled_consecutive(100, 5)
    shown, hidden = bob.sample(RngStream(2), 10_000)
    assert np.all(np.abs(shown - hidden) == 5)
    v = analysis.best_response_value(bob)
    assert v == HALF + Fraction(1, 200)
    eps = v - HALF
    assert v <= HALF + eps


def test_modular_three_pi_and_sure_fire():
    bob = B.modular_three({-2: Fraction(1, 4), 0: Fraction(1, 4), 5: Fraction(1, 2)})
    rep = analysis.best_response(bob)
    for x, pi in rep.pi_table.items():
        assert pi == (0 if x % 3 == 0 else 1)
    assert rep.value == 1
    assert all(x % 3 == 1 for x in rep.decision_set)


def test_modular_three_threshold_strategies_bounded():
    w = {0: Fraction(1, 3), 4: Fraction(2, 3)}
    bob = B.modular_three(w)
    cap = 1 - min(w.values()) / 2
    for t in np.linspace(-3, 16, 39):
        assert analysis.win_prob_vs_discrete(StepThreshold(t), bob) <= cap
    F = A.random_threshold(A.ThresholdDistribution.logistic(5, 3))
    assert analysis.win_prob_vs_discrete(F, bob) < 1


def test_location_constant_coverage_wins_half():
    ok, _ = mc_within(B.location_uniform(3.0), Constant(0.3), 0.5, N=10**5, seed=3)
    assert ok


def test_location_threshold_zero():
    # P(Y < 0 <= X) = 1/(12 m); verified by Monte Carlo
    m = 10
    ok, point = mc_within(B.location_uniform(m), StepThreshold(0), 0.5 + 1 / (12 * m), seed=4)
    assert ok, point


def test_location_best_response_value():
    v = analysis.best_response_value(B.location_uniform(50))
    assert v == pytest.approx(0.5 + 1 / 600, abs=1e-10)
    assert v < 0.51
    assert analysis.best_response_value(B.location_uniform(5)) > v


def test_location_latent_channel():
    s, h, b = B.location_uniform(2.0).sample_with_latent(RngStream(5), 1000)
    assert np.all((s - b >= 0) & (s - b <= 1)) and np.all(np.abs(b) <= 2.0)


def test_scale_inverse_cdf_endpoints():
    assert B.scale_inverse_cdf(0.5, 40.0) == pytest.approx(1.0)
    assert B.scale_inverse_cdf(1.0, 40.0) == pytest.approx(40.0)
    assert B.scale_inverse_cdf(0.0, 40.0) == pytest.approx(1 / 40)


def test_scale_mixture_best_response_gap():
    # the gap shrinks like 1/(4 log m); at m = e^10 it is about 0.025
    m = math.exp(10)
    v = analysis.best_response_value(B.scale_uniform_twocards(m))
    assert v == pytest.approx(0.525, abs=1e-6)
    vals = [analysis.best_response_value(B.scale_uniform_twocards(math.exp(L))) for L in (2, 5, 10, 20)]
    assert all(a > b for a, b in zip(vals, vals[1:])) and vals[-1] < 0.5125 + 1e-6
    # best response accepts iff pi(x) >= 1/2, i.e. x >= 1/(m + 1/m)
    ok, point = mc_within(B.scale_uniform_twocards(m), StepThreshold(1 / (m + 1 / m)), v, seed=6)
    assert ok, point


def test_iid_uniform_pair():
    bob = B.iid_uniform_pair()
    assert analysis.best_response_value(bob) == pytest.approx(0.75, abs=1e-12)
    assert analysis.conditional_median(bob, 0.3) == pytest.approx(0.5, abs=1e-12)
    ok, point = mc_within(bob, StepThreshold(0.5), 0.75, seed=7)
    assert ok, point


def test_zero_pm_one_is_always_half():
    bob = B.zero_pm_one()
    for F in (A.blind(1), A.blind(0), StepThreshold(0), StepThreshold(0.5),
              A.random_threshold(A.ThresholdDistribution.normal(0.2, 1))):
        assert analysis.win_prob_vs_discrete(F, bob) == pytest.approx(0.5, abs=1e-15)
    assert analysis.best_response(bob).value == HALF


def test_arrangement_closest_to_half():
    bob = B.arrangement_closest_to_half()
    s, h = bob.sample(RngStream(8), 100_000)
    assert np.all(np.abs(s - 0.5) <= np.abs(h - 0.5))
    ok, point = mc_within(bob, StepThreshold(0.5), 0.5, seed=9)
    assert ok, point
    ok, point = mc_within(bob, A.random_threshold(A.ThresholdDistribution.logistic(0.5, 0.1)), 0.5,
                          N=10**5, seed=10)
    assert ok, point
    assert analysis.best_response_value(bob) == pytest.approx(0.5, abs=1e-12)


EXCHANGEABLE = [
    B.pure_pair(7, 8),
    B.consecutive_uniform(5),
    B.scaled_consecutive(20, 3),
    B.modular_three({0: 0.5, 2: 0.5}),
    B.iid_uniform_pair(),
    B.location_uniform(4.0),
    B.scale_uniform_twocards(100.0),
]


@pytest.mark.parametrize("bob", EXCHANGEABLE, ids=lambda b: b.description)
def test_builtin_strategies_are_exchangeable(bob):
    passed, worst = sim.exchangeability_test(bob, seed=12)
    assert passed, worst


@pytest.mark.parametrize("bob", [B.zero_pm_one(), B.arrangement_closest_to_half()],
                         ids=["zero_pm_one", "arrangement"])
def test_order_choosing_strategies_are_flagged(bob):
    assert not bob.exchangeable
    assert not sim.exchangeability_test(bob, seed=13)[0]


@pytest.mark.parametrize("bob", [B.consecutive_uniform(4), B.modular_three({1: 1}),
                                 B.mixture_of_pairs([(0, 3, Fraction(1, 3)), (1, 2, Fraction(2, 3))])])
def test_best_response_is_maximal(bob):
    v = analysis.best_response(bob).value
    for F in (StepThreshold(2), A.blind(Fraction(1, 3)),
              A.random_threshold(A.ThresholdDistribution.discrete_uniform(1, 4)),
              A.gamma_mixture(A.random_threshold(A.ThresholdDistribution.logistic(0, 1)), 0.8)):
        assert v >= analysis.win_prob_vs_discrete(F, bob)


@pytest.mark.parametrize("m", range(1, 13))
def test_consecutive_uniform_value_exact(m):
    assert analysis.best_response(B.consecutive_uniform(m)).value == HALF + Fraction(1, 2 * m)
