import math
import warnings
from fractions import Fraction

import numpy as np
import pytest

from guessgame import alice as A
from guessgame import analysis
from guessgame.core import Constant, RngStream, StepThreshold

GRID = np.linspace(-10, 10, 201)
LOGISTIC = A.random_threshold(A.ThresholdDistribution.logistic(0, 1))


def test_blind_extremes():
    assert A.blind(1).at(123.0) == 1
    assert A.blind(0).at(-4.0) == 0
    bob_pairs = [(1, 2), (-3, 8.5)]
    for a, b in bob_pairs:
        assert analysis.win_prob_vs_pair(A.blind(Fraction(1, 2)), a, b) == Fraction(1, 2)


def test_point_mass_becomes_pure_threshold():
    F = A.random_threshold(A.ThresholdDistribution.point_mass(3))
    assert isinstance(F, StepThreshold) and F.t == 3


def test_logistic_cdf_values():
    assert LOGISTIC.at(0) == pytest.approx(0.5, abs=1e-15)
    assert LOGISTIC.at(1) == pytest.approx(0.731058578630, abs=1e-12)


@pytest.mark.parametrize("m", [1, 3, 4, 10])
def test_discrete_uniform_threshold_cdf(m):
    F = A.random_threshold(A.ThresholdDistribution.discrete_uniform(2, m + 1))
    for x in [-5, 0, 1, 1.5, 2, 2.7, m, m + 1, m + 1.2, m + 9]:
        expected = min(max(Fraction(math.floor(x) - 1, m), 0), 1)
        assert F.at(x) == expected


def test_dual_of_constant_and_step():
    assert A.dual(Constant(Fraction(1, 3))) == Constant(Fraction(2, 3))
    assert A.dual(StepThreshold(2)).at(2) == 0
    assert A.dual(StepThreshold(2)).at(1.9) == 1


def test_dual_win_is_complement():
    D = A.dual(LOGISTIC)
    for a, b in [(0, 1), (-2, 5), (3, 3.5)]:
        total = analysis.win_prob_vs_pair(LOGISTIC, a, b) + analysis.win_prob_vs_pair(D, a, b)
        assert total == pytest.approx(1.0, abs=1e-15)


def test_gamma_mixture_half_is_blind():
    assert A.gamma_mixture(LOGISTIC, Fraction(1, 2)) == Constant(Fraction(1, 2))


def test_gamma_mixture_win_value():
    M = A.gamma_mixture(LOGISTIC, 0.75)
    w = analysis.win_prob_vs_pair(M, 0, 1)
    assert w == pytest.approx(0.5 + 0.25 * (LOGISTIC.at(1) - LOGISTIC.at(0)), abs=1e-12)
    assert w == pytest.approx(0.557764644658, abs=1e-9)


def test_gamma_mixture_beats_half_everywhere():
    M = A.gamma_mixture(LOGISTIC, Fraction(3, 4))
    rnd = np.random.default_rng(0)
    for a in rnd.uniform(-8, 8, 50):
        b = a + rnd.exponential(2)
        assert analysis.win_prob_vs_pair(M, a, b) > 0.5


def test_poisson_homogeneous_log2_is_half():
    F = A.poisson_coverage("homogeneous", math.log(2))
    assert F.at(0) == pytest.approx(0.5, abs=1e-15)
    assert F.at(-7.3) == pytest.approx(0.5, abs=1e-15)


def test_poisson_exponential_values_and_limits():
    F = A.poisson_coverage("exponential")
    assert F.at(0) == pytest.approx(0.468536394613, abs=1e-12)
    assert F.cumulative(0.0) == pytest.approx(0.632121, abs=1e-6)
    assert F.at(-40) < 1e-15 and F.at(5) > 1 - 1e-15
    c = A.classify(F, GRID)
    assert c.strongly_dominant and c.proper and c.superminimax


def test_poisson_exponential_equals_threshold_with_same_cdf():
    F = A.poisson_coverage("exponential")
    cdf = lambda x: 1 - math.exp(-(1 - math.exp(-1)) * math.exp(x))
    for x in np.linspace(-6, 3, 19):
        assert F.at(x) == pytest.approx(cdf(x), abs=1e-14)


@pytest.mark.parametrize("kind,rate,x,p", [
    ("homogeneous", math.log(2), 0.3, 0.5),
    ("homogeneous", 1.7, 2.0, 1 - math.exp(-1.7)),
    ("exponential", 1.0, 0.0, 1 - math.exp(-(1 - math.exp(-1)))),
])
def test_poisson_sampler_coverage(kind, rate, x, p):
    F = A.poisson_coverage(kind, rate)
    N = 10**5
    gen = np.random.default_rng(11)
    hits = sum(A.covers(A.sample_poisson_decision_set(F, (x - 0.5, x + 0.5), gen), x) for _ in range(N))
    assert abs(hits / N - p) <= 3 * math.sqrt(p * (1 - p) / N)


def test_poisson_small_rate_mostly_empty():
    F = A.poisson_coverage("homogeneous", 1e-9)
    gen = np.random.default_rng(0)
    assert all(not A.sample_poisson_decision_set(F, (0, 10), gen) for _ in range(200))


def test_poisson_intervals_disjoint_sorted():
    F = A.poisson_coverage("homogeneous", 3.0)
    iv = A.sample_poisson_decision_set(F, (0, 20), np.random.default_rng(5))
    assert all(l <= r for l, r in iv)
    assert all(r1 < l2 for (_, r1), (l2, _) in zip(iv, iv[1:]))
    assert iv[0][0] >= 0 and iv[-1][1] <= 20


def test_lattice_bernoulli_full_and_constant():
    full = A.LatticeTable(-3, (1,) * 7)
    assert A.lattice_bernoulli(full, RngStream(0)) == set(range(-3, 4))
    const = A.LatticeTable(0, (0.3,) * 10)
    for a, b in [(0, 1), (2, 9)]:
        assert analysis.win_prob_vs_pair(const, a, b) == pytest.approx(0.5, abs=1e-15)


def test_q_lattice_inclusion_frequencies():
    F = A.q_lattice(0.5)
    N = 10**5
    gen = np.random.default_rng(3)
    counts = dict.fromkeys(range(-10, 11), 0)
    for _ in range(N):
        for j in A.lattice_bernoulli(F, gen):
            counts[j] += 1
    for j, c in counts.items():
        p = 1 / (1 + 0.5**j)
        assert abs(c / N - p) <= 3 * math.sqrt(p * (1 - p) / N) + 1e-12
    assert F.window_strictly_increasing


def test_classify_examples():
    c = A.classify(StepThreshold(0), GRID)
    assert (c.minimax, c.strongly_dominant, c.proper) == (True, False, True)
    assert A.classify(LOGISTIC, GRID).superminimax is True
    M = A.gamma_mixture(LOGISTIC, Fraction(3, 4))
    c = A.classify(M, GRID)
    assert c.strongly_dominant is True and c.proper is False and c.superminimax is False
    assert M.limits() == (Fraction(1, 4), Fraction(3, 4))


def test_classify_refutes_but_never_certifies():
    wiggle = A.FunctionCoverage(lambda x: 0.5 + 0.4 * math.sin(x))
    F = A.FunctionCoverage(lambda x: 1 / (1 + math.exp(-x)))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", A.UnknownClassification)
        assert A.classify(wiggle, GRID).minimax is False
    with pytest.warns(A.UnknownClassification):
        c = A.classify(F, np.linspace(-30, 30, 301))
    assert c.minimax is None and c.proper is True and not c.certified


@pytest.mark.parametrize("F", [
    LOGISTIC,
    A.random_threshold(A.ThresholdDistribution.normal(1, 2, p_plus=0.1)),
    A.gamma_mixture(LOGISTIC, 0.3),
    A.poisson_coverage("exponential"),
    A.q_lattice(0.5),
    A.PiecewiseLinear(((-1, 0.1), (2, 0.9))),
])
def test_coverage_range_and_right_continuity(F):
    xs = np.linspace(-12, 12, 481)
    vals = F(xs)
    assert np.all((vals >= 0) & (vals <= 1))
    for x in (-2.0, 0.0, 1.0, 3.0):
        assert F(x + 1e-12) == pytest.approx(F(x), abs=1e-9)


def test_proper_limits():
    F = A.random_threshold(A.ThresholdDistribution.normal(0, 1))
    lo, hi = F.limits()
    assert (lo, hi) == (0, 1) and F(-50.0) < 1e-12 and F(50.0) > 1 - 1e-12


def test_threshold_sample_matches_cdf():
    d = A.ThresholdDistribution.logistic(1, 2, p_minus=0.1, p_plus=0.2)
    t = d.sample(np.random.default_rng(4), 200_000)
    assert abs(np.mean(t == -np.inf) - 0.1) < 0.005
    assert abs(np.mean(t == np.inf) - 0.2) < 0.005
    assert abs(np.mean(t <= 1.0) - d.cdf_at(1.0)) < 0.005
