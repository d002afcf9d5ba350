"""Reproduction checks for every headline claim, at full size.

Each check returns a :class:`Check`; ``run_all`` runs them in order. The
CLI ``repro`` command and ``tests/test_acceptance.py`` both drive these.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import alice as A
from . import analysis, bob as B, sim, twopile as TP
from .core import Constant, StepThreshold


@dataclass
class Check:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:2d} {self.name}: {self.detail}"


def check_finite_game(max_m: int = 20) -> Check:
    t0 = time.perf_counter()
    bad = []
    for m in range(1, max_m + 1):
        try:
            cert = analysis.finite_game_oracle(m)
        except AssertionError as e:
            bad.append(str(e))
            continue
        expected = Fraction(1, 2) + Fraction(1, 2 * m)
        if not (cert.value == cert.alice_guarantee == cert.bob_cap == expected):
            bad.append(f"m={m}")
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 60
    return Check(1, "finite game value 1/2 + 1/(2m), m=1..20", ok,
                 f"{len(bad)} mismatches, {elapsed:.1f}s (limit 60s)")


def check_two_cards_iid(N: int = 10**6, seed: int = 2) -> Check:
    exact = analysis.iid_best_response_value()
    quad = analysis.best_response_value(B.iid_uniform_pair())
    est = sim.estimate(B.iid_uniform_pair(), StepThreshold(0.5), N, seed)
    tol = 3 * math.sqrt(0.1875 / N)
    ok = exact == Fraction(3, 4) and abs(quad - 0.75) < 1e-10 and abs(est.point - 0.75) <= tol
    return Check(2, "two iid cards: best response 3/4", ok,
                 f"exact {exact}, quadrature {quad:.12g}, MC {est.point:.6f} (tol {tol:.5f})")


def check_training_sample(N: int = 10**6, seed: int = 3) -> Check:
    exact = analysis.training_sample_value()
    target = 2 / 3
    tol = 3 * math.sqrt(target * (1 - target) / N)
    ests = {d: sim.training_sample_sim(N, seed + i, d)
            for i, d in enumerate(("uniform", "exponential"))}
    ok = exact == Fraction(2, 3) and all(abs(e.point - target) <= tol for e in ests.values())
    detail = ", ".join(f"{d} {e.point:.6f}" for d, e in ests.items())
    return Check(3, "training sample 2/3", ok, f"exact {exact}; MC {detail} (tol {tol:.5f})")


def random_coverage(rnd: random.Random):
    """Draw a coverage function from a mixed corpus (used for check 4)."""
    pick = rnd.randrange(9)
    if pick == 0:
        return A.random_threshold(A.ThresholdDistribution.logistic(rnd.uniform(-3, 3), rnd.uniform(0.3, 3)))
    if pick == 1:
        return A.random_threshold(A.ThresholdDistribution.normal(rnd.uniform(-3, 3), rnd.uniform(0.3, 3),
                                                                 p_plus=rnd.choice([0, 0.2])))
    if pick == 2:
        F = A.random_threshold(A.ThresholdDistribution.logistic(0, 1))
        return A.gamma_mixture(F, rnd.uniform(0, 1))
    if pick == 3:
        return A.poisson_coverage("exponential")
    if pick == 4:
        xs = sorted(rnd.sample(range(-5, 6), 4))
        return A.PiecewiseLinear(tuple((x, rnd.random()) for x in xs))
    if pick == 5:
        return Constant(rnd.random())
    if pick == 6:
        return StepThreshold(rnd.uniform(-4, 4))
    if pick == 7:
        return A.random_threshold(A.ThresholdDistribution.discrete_uniform(-3, rnd.randrange(-2, 5)))
    return A.dual(A.q_lattice(0.5, -5, 5))


def check_pairwise_formula(instances: int = 200, N: int = 10**5, seed: int = 4) -> Check:
    rnd = random.Random(seed)
    t0 = time.perf_counter()
    worst = 0.0
    fails = 0
    for i in range(instances):
        F = random_coverage(rnd)
        a = rnd.uniform(-5, 5)
        b = a + rnd.expovariate(0.5)
        p = 0.5 + (F.at(b) - F.at(a)) / 2
        est = sim.estimate(B.pure_pair(a, b), F, N, seed=1000 + i)
        sd = math.sqrt(p * (1 - p) / N)
        dev = abs(est.point - p)
        z = dev / sd if sd > 0 else (0.0 if dev < 1e-15 else math.inf)
        worst = max(worst, z)
        fails += z > 4
    elapsed = time.perf_counter() - t0
    ok = fails == 0 and elapsed < 300
    return Check(4, "pairwise win formula vs Monte Carlo", ok,
                 f"{instances} instances, worst {worst:.2f} sigma (limit 4), {elapsed:.1f}s")


def random_inequality_instance(rnd: random.Random):
    npairs = rnd.randint(1, 4)
    raw = [rnd.randint(1, 9) for _ in range(npairs)]
    pairs = []
    for w in raw:
        a = rnd.randint(-10, 9)
        b = rnd.randint(a + 1, 10)
        pairs.append((a, b, Fraction(w, sum(raw))))
    bob = B.mixture_of_pairs(pairs)
    atoms = dict(p_minus=Fraction(rnd.randint(0, 2), 10), p_plus=Fraction(rnd.randint(0, 2), 10))
    if rnd.random() < 0.5:
        lo = rnd.randint(-10, 10)
        d = A.ThresholdDistribution.discrete_uniform(lo, rnd.randint(lo, 12), **atoms)
    else:
        d = A.ThresholdDistribution.point_mass(rnd.randint(-11, 11), **atoms)
    return bob, d


def check_inequality(instances: int = 1000, seed: int = 5) -> Check:
    rnd = random.Random(seed)
    done = bad = strict = 0
    while done < instances:
        bob, d = random_inequality_instance(rnd)
        try:
            lhs, cert = analysis.conditional_inequality(bob, d)
        except analysis.ConditioningOnNull:
            continue
        done += 1
        ok = (isinstance(lhs, Fraction) and cert.identity_holds and lhs >= Fraction(1, 2)
              and (cert.p_between == 0 or lhs > Fraction(1, 2)))
        bad += not ok
        strict += cert.p_between > 0
    return Check(5, "conditional inequality P(X>Y | X>=T) >= 1/2 (exact)", bad == 0,
                 f"{instances} instances, {strict} strict, {bad} violations")


def superminimax_corpus():
    """Built-in strategies with superminimax labels read off from
    'strictly increasing and proper'."""
    L = A.random_threshold(A.ThresholdDistribution.logistic(0, 1))
    Nrm = A.random_threshold(A.ThresholdDistribution.normal(0, 1))
    return [
        ("logistic threshold", L, True),
        ("normal threshold", Nrm, True),
        ("normal threshold, atom at +inf", A.random_threshold(A.ThresholdDistribution.normal(0, 1, p_plus=0.1)), False),
        ("pure threshold", StepThreshold(0), False),
        ("discrete uniform threshold", A.random_threshold(A.ThresholdDistribution.discrete_uniform(2, 11)), False),
        ("continuous uniform threshold", A.random_threshold(A.ThresholdDistribution.continuous_uniform(0, 1)), False),
        ("blind 1/2", A.blind(Fraction(1, 2)), False),
        ("blind 1", A.blind(1), False),
        ("gamma mixture 3/4", A.gamma_mixture(L, Fraction(3, 4)), False),
        ("gamma mixture 1", A.gamma_mixture(L, 1), True),
        ("dual logistic", A.dual(L), False),
        ("poisson exponential", A.poisson_coverage("exponential"), True),
        ("poisson homogeneous", A.poisson_coverage("homogeneous", math.log(2)), False),
        ("q lattice", A.q_lattice(0.5), False),
        ("piecewise linear", A.PiecewiseLinear(((-1, 0.0), (1, 1.0))), False),
        ("logistic/normal mixture", A.Mixture(0.5, L, Nrm), True),
        ("logistic/step mixture", A.Mixture(0.5, L, StepThreshold(0)), True),
    ]


def check_dominance(seed: int = 6) -> Check:
    grid = np.linspace(-10, 10, 100)
    L = A.random_threshold(A.ThresholdDistribution.logistic(0, 1))
    verdict = analysis.dominance_check(L, A.gamma_mixture(L, Fraction(3, 4)), grid)
    wrong = [name for name, F, label in superminimax_corpus()
             if A.classify(F, grid).superminimax is not label]
    ok = verdict is analysis.Dominance.DOMINATES and not wrong
    return Check(6, "threshold dominates (F, 3/4) mixture; superminimax labels", ok,
                 f"verdict {verdict.value}; misclassified {wrong or 'none'}")


def check_two_pile_iid(N: int = 10**6, seed: int = 7) -> Check:
    r, v = TP.worst_ratio()
    ratios = np.arange(0.05, 0.95 + 1e-9, 0.001)
    vals = TP.iid_value_of_ratio(ratios)
    i = int(np.argmin(vals))
    sweep_ok = abs(ratios[i] - 0.587) <= 0.005 and abs(vals[i] - 0.741) <= 0.005
    golden_ok = abs(r - 0.587) <= 0.005 and abs(v - 0.741) <= 0.005
    spots = []
    spot_ok = True
    for (n, k), target, tol in (((2, 1), 0.75, 1e-12), ((3, 1), 0.8047, 1e-4)):
        cfg = TP.PileConfig(n, k)
        exact = TP.iid_value(cfg)
        x, y = TP.iid_deals(cfg, N, np.random.default_rng([seed, n, k]))
        win = np.mean((x >= TP.iid_median(cfg)) == (x > y))
        sd = math.sqrt(exact * (1 - exact) / N)
        spot_ok &= abs(exact - target) <= tol and abs(win - exact) <= 3 * sd
        spots.append(f"({n},{k}) {exact:.6f} MC {win:.5f}")
    ok = sweep_ok and golden_ok and spot_ok
    return Check(7, "iid two-pile worst ratio and spot values", ok,
                 f"golden ({r:.4f}, {v:.4f}), sweep ({ratios[i]:.3f}, {vals[i]:.4f}); " + "; ".join(spots))


def check_scale_mixture(N: int = 10**6, seed: int = 8, eps: float = 0.01) -> Check:
    delta = TP.select_delta(eps)
    model = TP.ScaleMixtureModel(delta)
    rep = TP.epsilon_bound_check(10, eps, delta)
    cfg = TP.PileConfig(4, 3)
    _, log_z = TP.deals(cfg, model, N, np.random.default_rng(seed))
    lx, ly = TP.pile_maxima(log_z, cfg)
    truth = lx > ly
    br = (TP.pi_nk_log(lx, cfg, model) >= 0.5) == truth
    blind = np.full(N, TP.blind_decision(cfg)) == truth
    diff = br.astype(float) - blind
    adv, sd = diff.mean(), diff.std() / math.sqrt(N)
    adv_ok = -3 * sd - 1e-15 <= adv <= eps + 3 * sd
    v_sym = TP.best_response_value_quadrature(TP.PileConfig(4, 2), model)
    sym_ok = v_sym <= 0.5 + eps + 1e-6
    ok = rep.passed and adv_ok and sym_ok
    return Check(8, "scale mixture: eps-bound, blind guessing optimal", ok,
                 f"delta {delta:.5g}, max |pi - k/n| {rep.max_deviation:.3g} at (n,k)=({rep.n},{rep.k}); "
                 f"(4,3) advantage {adv:.2e} +- {sd:.1e}; (4,2) value {v_sym:.6f}")


def check_densities() -> Check:
    worst_g = worst_norm = worst_marg = 0.0
    for delta in (0.01, 0.3, 0.7):
        model = TP.ScaleMixtureModel(delta)
        for n in (1, 2, 3, 4, 5, 10):
            for x in (0.1, 0.5, 1.0, 2.0, 10.0):
                q = TP.g_n_quadrature(x, n, model)
                worst_g = max(worst_g, abs(TP.g_n_eval(x, n, model) - q) / q)
            worst_norm = max(worst_norm, abs(TP.normalization(n, model) - 1))
        for n, k in ((3, 1), (4, 2), (5, 3)):
            cfg = TP.PileConfig(n, k)
            for x in (0.05, 0.3, 0.9, 1.5, 7.0):
                gk = TP.g_n_eval(x, k, model)
                worst_marg = max(worst_marg, abs(TP.g_k_marginal_quadrature(x, cfg, model) - gk) / gk)
    ok = worst_g < 1e-8 and worst_norm < 1e-8 and worst_marg < 1e-6
    return Check(9, "density closed forms vs quadrature", ok,
                 f"g_n rel {worst_g:.1e} (<1e-8), normalisation {worst_norm:.1e} (<1e-8), "
                 f"marginal rel {worst_marg:.1e} (<1e-6)")


def repeated_game_strategies():
    return [
        ("step 1.5", StepThreshold(1.5)),
        ("step 10.5", StepThreshold(10.5)),
        ("step 500.5", StepThreshold(500.5)),
        ("step 5000.5", StepThreshold(5000.5)),
        ("uniform threshold on 2..101", A.random_threshold(A.ThresholdDistribution.discrete_uniform(2, 101))),
        ("logistic(50, 20)", A.random_threshold(A.ThresholdDistribution.logistic(50, 20))),
        ("normal(1000, 500)", A.random_threshold(A.ThresholdDistribution.normal(1000, 500))),
    ]


def check_repeated_game(R: int = 10**4, seed: int = 10) -> Check:
    bound = sim.repeated_game_bound(R)
    finals = {}
    for i, (name, F) in enumerate(repeated_game_strategies()):
        finals[name] = sim.repeated_game(F, R, seed + i).final
    worst = max(finals.values())
    return Check(10, "repeated game caps threshold strategies", worst <= bound,
                 f"max final frequency {worst:.5f} over {len(finals)} strategies, bound {bound:.5f}")


def check_rank(N: int = 10**6, seed: int = 11) -> Check:
    T = A.ThresholdDistribution.continuous_uniform(0, 1)
    fails = []
    for n in range(3, 7):
        rows = sim.rank_experiment(n, T, N, seed + n)
        for row in rows:
            base = (n - row.k) / n
            exact = analysis.rank_tail_conditional(n, row.k)
            sd_c = math.sqrt(exact * (1 - exact) / row.n_cond)
            sd_u = math.sqrt(base * (1 - base) / N)
            if not (row.p_tail_given >= base - 4 * sd_c and exact > base
                    and abs(row.p_tail_given - exact) <= 4 * sd_c
                    and abs(row.p_tail - base) <= 4 * sd_u):
                fails.append((n, row.k))
    top = analysis.top_rank_conditional_quadrature(3)
    ok = not fails and abs(top - 0.5) <= 1e-6
    return Check(11, "threshold information raises the rank", ok,
                 f"n=3..6 failures {fails or 'none'}; P(R=3 | X1>=T) = {top:.8f} vs 1/3 unconditional")


CHECKS: list[Callable[[], Check]] = [
    check_finite_game,
    check_two_cards_iid,
    check_training_sample,
    check_pairwise_formula,
    check_inequality,
    check_dominance,
    check_two_pile_iid,
    check_scale_mixture,
    check_densities,
    check_repeated_game,
    check_rank,
]


def run_all(echo: Callable[[str], None] | None = None) -> list[Check]:
    results = []
    for fn in CHECKS:
        res = fn()
        if echo is not None:
            echo(res.line())
        results.append(res)
    return results
