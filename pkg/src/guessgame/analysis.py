"""Exact win probabilities, best responses and the finite-game oracle.

Discrete computations run in whatever number type the inputs carry, so
integer pairs with ``Fraction`` weights and exactly evaluable coverage
functions give exact rationals.
"""

from __future__ import annotations

import enum
import itertools
import math
import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .alice import ThresholdDistribution, random_threshold
from .bob import ContinuousBobStrategy, DiscreteBobStrategy, consecutive_uniform
from .core import CoverageFunction, InvalidPair, TieError, as_generator

HALF = Fraction(1, 2)
Rational = Fraction


class UnsupportedPoint(ValueError):
    """Conditioning on an observation with zero probability."""


class ConditioningOnNull(ZeroDivisionError):
    """``P(X >= T) = 0``; the conditional probability is undefined."""


class ExhaustionLimit(ValueError):
    """Exhaustive decision-set enumeration requested beyond its bound."""


EXHAUSTIVE_LIMIT = 20


def payoff_pure(indicator: Callable, a, b) -> Fraction:
    """Win probability of a pure decision set against the pair ``a < b``."""
    if not a < b:
        raise InvalidPair(f"need a < b, got ({a!r}, {b!r})")
    in_a, in_b = bool(indicator(a)), bool(indicator(b))
    if in_a == in_b:
        return HALF
    return Fraction(1) if in_b else Fraction(0)


def win_prob_vs_pair(F: CoverageFunction, a, b):
    if not a < b:
        raise InvalidPair(f"need a < b, got ({a!r}, {b!r})")
    return HALF + (F.at(b) - F.at(a)) * HALF


def win_prob_vs_discrete(F: CoverageFunction, bob: DiscreteBobStrategy):
    """Exact win probability; pairwise formula for exchangeable strategies."""
    if not bob.exchangeable:
        return win_prob_direct(F, bob)
    return sum(w * win_prob_vs_pair(F, a, b) for a, b, w in bob.pairs)


def win_prob_direct(F: CoverageFunction, bob: DiscreteBobStrategy):
    """``E[1(X>Y) F(X) + 1(X<Y)(1 - F(X))]`` over the ordered joint law."""
    total = 0
    for x, y, p in bob.outcomes:
        f = F.at(x)
        total += p * (f if x > y else 1 - f)
    return total


@dataclass
class BestResponseReport:
    value: object
    decision_set: list
    pi_table: dict
    marginal: dict = field(default_factory=dict)

    def accepts(self, x) -> bool:
        return x in set(self.decision_set)


def _conditional_tables(bob: DiscreteBobStrategy):
    marginal = defaultdict(int)
    below = defaultdict(int)
    cond = defaultdict(list)
    for x, y, p in bob.outcomes:
        if x == y:
            raise TieError(f"tie at {x!r}")
        marginal[x] += p
        if y < x:
            below[x] += p
        cond[x].append((y, p))
    return marginal, below, cond


def best_response(bob: DiscreteBobStrategy) -> BestResponseReport:
    """Accept iff ``pi(x) >= 1/2``; value ``1/2 + E|pi(X) - 1/2|``."""
    marginal, below, _ = _conditional_tables(bob)
    pi_table = {}
    accept = []
    value = HALF
    for x in sorted(marginal):
        px = marginal[x]
        if px == 0:
            continue
        pi = below[x] / px
        pi_table[x] = pi
        if pi >= HALF:
            accept.append(x)
        value += px * abs(pi - HALF)
    return BestResponseReport(value, accept, pi_table, dict(marginal))


def conditional_median(bob, x):
    """``mu(x) = inf{y : P(Y <= y | X = x) >= 1/2}``."""
    if isinstance(bob, ContinuousBobStrategy):
        if bob.conditional_cdf is None:
            raise NotImplementedError("strategy has no conditional CDF")
        from scipy.optimize import brentq

        lo, hi = bob.support
        return brentq(lambda y: bob.conditional_cdf(y, x) - 0.5, lo, hi, xtol=1e-14)
    marginal, _, cond = _conditional_tables(bob)
    px = marginal.get(x, 0)
    if px == 0:
        raise UnsupportedPoint(f"P(X = {x!r}) = 0")
    acc = 0
    for y, p in sorted(cond[x]):
        acc += p
        if acc / px >= HALF:
            return y
    raise AssertionError("conditional law does not sum to one")


def _quad_pieces(f, support, breakpoints):
    lo, hi = support
    cuts = [lo] + sorted(b for b in breakpoints if lo < b < hi) + [hi]
    total, err = 0.0, 0.0
    for a, b in zip(cuts, cuts[1:]):
        v, e = integrate.quad(f, a, b, epsabs=1e-13, epsrel=1e-11, limit=200)
        total += v
        err += e
    return total, err


def best_response_value(bob, *, n_mc: int = 10**6, bins: int = 200, seed: int = 0):
    """Best-response value for any Bob strategy.

    Discrete: exact. Continuous with closed-form ``pi`` and density: quadrature
    of ``1/2 + E|pi(X) - 1/2|``. Otherwise a binned Monte Carlo estimate of
    ``pi``, with a warning since binning biases the value downwards.
    """
    if isinstance(bob, DiscreteBobStrategy):
        return best_response(bob).value
    if bob.analytic_pi is not None and bob.marginal_density is not None:
        f = lambda x: abs(bob.analytic_pi(x) - 0.5) * bob.marginal_density(x)
        v, _ = _quad_pieces(f, bob.support, bob.breakpoints)
        return 0.5 + v
    warnings.warn("no analytic pi; estimating best response by Monte Carlo")
    shown, hidden = bob.sample(as_generator(seed), n_mc)
    edges = np.unique(np.quantile(shown, np.linspace(0, 1, bins + 1)))
    idx = np.clip(np.searchsorted(edges, shown, side="right") - 1, 0, edges.size - 2)
    n = np.bincount(idx, minlength=edges.size - 1)
    up = np.bincount(idx, weights=(shown > hidden), minlength=edges.size - 1)
    ok = n > 0
    pi = up[ok] / n[ok]
    return 0.5 + float(np.sum(n[ok] / n_mc * np.abs(pi - 0.5)))


def threshold_win_exact(d: ThresholdDistribution, bob: DiscreteBobStrategy):
    """``1/2 + P(Y < T <= X)`` summed over Bob's ordered outcomes.

    The identity needs exchangeability; other strategies are evaluated
    directly.
    """
    if not bob.exchangeable:
        return win_prob_direct(random_threshold(d), bob)
    extra = 0
    for x, y, p in bob.outcomes:
        if y < x:
            extra += p * (d.cdf_at(x) - d.cdf_at(y))
    return HALF + extra


@dataclass
class InequalityCertificate:
    p_x_ge_t: object
    p_y_lt_t_given: object
    p_between: object
    rhs: object
    identity_holds: bool
    bound_holds: bool
    strict: bool


def conditional_inequality(bob: DiscreteBobStrategy, d: ThresholdDistribution):
    """``P(X > Y | X >= T)`` and a certificate that it equals
    ``1/2 + P(Y < T | X >= T) / 2 >= 1/2``.
    """
    p_ge = 0
    p_win_ge = 0
    p_both = 0  # P(Y < T <= X)
    for x, y, p in bob.outcomes:
        fx, fy = d.cdf_at(x), d.cdf_at(y)
        p_ge += p * fx
        if x > y:
            p_win_ge += p * fx
            p_both += p * (fx - fy)
    if p_ge == 0:
        raise ConditioningOnNull("P(X >= T) = 0")
    lhs = p_win_ge / p_ge
    cond = p_both / p_ge
    rhs = HALF + cond * HALF
    exact_arith = isinstance(lhs, Fraction) and isinstance(rhs, Fraction)
    identity = lhs == rhs if exact_arith else math.isclose(lhs, rhs, abs_tol=1e-12)
    cert = InequalityCertificate(
        p_x_ge_t=p_ge,
        p_y_lt_t_given=cond,
        p_between=p_both,
        rhs=rhs,
        identity_holds=bool(identity),
        bound_holds=bool(lhs >= HALF),
        strict=bool(lhs > HALF),
    )
    return lhs, cert


class Dominance(enum.Enum):
    DOMINATES = "dominates"
    DOMINATED = "dominated"
    INCOMPARABLE = "incomparable"
    EQUAL = "equal"


def dominance_check(F1, F2, grid: Sequence[float], tol: float = 1e-12) -> Dominance:
    """Compare increments ``F(b) - F(a)`` over all grid pairs ``a < b``.

    By the pairwise win formula this compares the two strategies against
    every pure Bob strategy supported on the grid.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size < 2 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be sorted with at least two points")
    v1, v2 = F1(grid), F2(grid)
    iu = np.triu_indices(grid.size, k=1)
    d = (v1[iu[1]] - v1[iu[0]]) - (v2[iu[1]] - v2[iu[0]])
    ge = np.all(d >= -tol)
    le = np.all(d <= tol)
    if ge and le:
        return Dominance.EQUAL
    if ge:
        return Dominance.DOMINATES
    if le:
        return Dominance.DOMINATED
    return Dominance.INCOMPARABLE


@dataclass
class FiniteGameCertificate:
    m: int
    value: Fraction
    alice_guarantee: Fraction
    bob_cap: Fraction
    exhaustive: bool
    best_decision_set: tuple


def _bob_cap_exhaustive(m: int):
    """Max over all ``2^(m+1)`` decision sets of the win probability against
    :func:`consecutive_uniform`, via the pure payoff table (in half-units)."""
    masks = np.arange(1 << (m + 1), dtype=np.int64)
    total2 = np.zeros(masks.size, dtype=np.int64)
    for beta in range(1, m + 1):
        in_a = (masks >> (beta - 1)) & 1
        in_b = (masks >> beta) & 1
        # 2 p(a, b; D): both or neither -> 1, only b -> 2, only a -> 0
        total2 += 1 + in_b - in_a
    best = int(np.argmax(total2))
    members = tuple(j + 1 for j in range(m + 1) if (best >> j) & 1)
    return Fraction(int(total2[best]), 2 * m), members


def finite_game_oracle(m: int, exhaustive: bool = True) -> FiniteGameCertificate:
    """Certify the value of the game on ``{1, ..., m + 1}``.

    Alice's guarantee: the uniform threshold on ``{2, ..., m + 1}`` against
    every pure pair. Bob's cap: the best decision set against the uniform
    consecutive-pair mixture, found by enumerating all of them.
    """
    if m < 1:
        raise ValueError("need m >= 1")
    F = random_threshold(ThresholdDistribution.discrete_uniform(2, m + 1))
    guarantee = min(
        win_prob_vs_pair(F, a, b)
        for a, b in itertools.combinations(range(1, m + 2), 2)
    )
    if exhaustive:
        if m > EXHAUSTIVE_LIMIT:
            raise ExhaustionLimit(f"m = {m} exceeds {EXHAUSTIVE_LIMIT}")
        cap, members = _bob_cap_exhaustive(m)
    else:
        report = best_response(consecutive_uniform(m))
        cap, members = report.value, tuple(report.decision_set)
    expected = HALF + Fraction(1, 2 * m)
    if not (guarantee == cap == expected):
        raise AssertionError(
            f"m={m}: guarantee {guarantee}, cap {cap}, expected {expected}"
        )
    return FiniteGameCertificate(m, expected, guarantee, cap, exhaustive, members)


def training_sample_value(values: Sequence = (1, 2, 3)) -> Fraction:
    """Win probability when the first of three shuffled cards is the threshold.

    Enumerates all ``3! = 6`` arrangements ``(T, X, Y)`` of ``values``.
    """
    if len(set(values)) != 3 or len(values) != 3:
        raise TieError("need three distinct numbers")
    wins = 0
    perms = list(itertools.permutations(values))
    for t, x, y in perms:
        accept = x >= t
        wins += accept == (x > y)
    return Fraction(wins, len(perms))


def rank_tail_conditional(n: int, k: int) -> float:
    """``P(R > k | X_1 >= T)`` for ``n`` iid uniforms and ``T ~ U[0, 1]``.

    ``R > k`` iff at least ``k`` of the other ``n - 1`` values lie below
    ``X_1``; ``P(X_1 >= T | X_1 = x) = x`` and ``P(X_1 >= T) = 1/2``.
    """
    from scipy.stats import binom

    f = lambda x: x * binom.sf(k - 1, n - 1, x)
    v, _ = integrate.quad(f, 0.0, 1.0, epsabs=1e-14, epsrel=1e-12)
    return 2.0 * v


def top_rank_conditional_quadrature(n: int = 3) -> float:
    """``P(R = n | X_1 >= T) = int x * x^(n-1) dx / int x dx``."""
    num, _ = integrate.quad(lambda x: x * x ** (n - 1), 0.0, 1.0, epsabs=1e-14)
    den, _ = integrate.quad(lambda x: x, 0.0, 1.0, epsabs=1e-14)
    return num / den


def iid_best_response_value() -> Fraction:
    """Two iid continuous cards: ``pi(X)`` is uniform, ``v = 1/2 + E|U - 1/2|``.

    ``E|U - c| = (c^2 + (1 - c)^2) / 2`` for ``U ~ U[0, 1]``.
    """
    c = HALF
    return HALF + (c * c + (1 - c) * (1 - c)) / 2
