"""Seeded Monte Carlo: win-rate estimates, the repeated game, rank experiments."""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.stats import binomtest

from .alice import ThresholdDistribution
from .bob import consecutive_uniform
from .core import CoverageFunction, RngStream, play_rounds

SHARD = 1 << 18


class DegenerateConditioning(RuntimeError):
    """No trial satisfied the conditioning event."""


def wilson_interval(successes: int, trials: int, confidence: float = 0.95):
    ci = binomtest(successes, trials).proportion_ci(
        confidence_level=confidence, method="wilson"
    )
    return float(ci.low), float(ci.high)


@dataclass(frozen=True)
class MonteCarloEstimate:
    successes: int
    trials: int
    point: float
    ci95: tuple
    seed: int

    @classmethod
    def from_counts(cls, successes: int, trials: int, seed: int):
        return cls(
            int(successes),
            int(trials),
            successes / trials,
            wilson_interval(int(successes), int(trials)),
            seed,
        )

    def sigma(self, p: Optional[float] = None) -> float:
        """Binomial standard error at ``p`` (default: the point estimate)."""
        p = self.point if p is None else p
        return math.sqrt(p * (1 - p) / self.trials)

    def within(self, p: float, z: float = 3.0) -> bool:
        """``|point - p| <= z sigma(p)``; exact hits pass when ``sigma = 0``."""
        return abs(self.point - p) <= z * self.sigma(p) + 1e-15

    def to_dict(self) -> dict:
        d = asdict(self)
        d["ci95"] = list(self.ci95)
        return d


def merge(estimates: Sequence[MonteCarloEstimate]) -> MonteCarloEstimate:
    s = sum(e.successes for e in estimates)
    n = sum(e.trials for e in estimates)
    return MonteCarloEstimate.from_counts(s, n, estimates[0].seed)


def _shards(N: int, shard: int):
    return [(i, min(shard, N - i * shard)) for i in range(math.ceil(N / shard))]


def run_sharded(count: Callable, N: int, seed: int, workers: int = 1, shard: int = SHARD):
    """Run ``count(rng, n) -> successes`` over shards with ``stream_id = shard
    index``. Results do not depend on ``workers``."""
    jobs = _shards(N, shard)
    run = lambda job: int(count(RngStream(seed, job[0]), job[1]))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            counts = list(pool.map(run, jobs))
    else:
        counts = [run(j) for j in jobs]
    return MonteCarloEstimate.from_counts(sum(counts), N, seed)


def estimate(
    bob, alice: CoverageFunction, N: int, seed: int = 0, workers: int = 1
) -> MonteCarloEstimate:
    """Monte Carlo win rate of ``alice`` against ``bob`` over ``N`` rounds."""
    if N < 1:
        raise ValueError("N must be positive")
    return run_sharded(
        lambda rng, n: np.count_nonzero(play_rounds(bob, alice, rng, n)),
        N,
        seed,
        workers,
    )


@dataclass
class RepeatedGameTrace:
    rounds: int
    running_frequency: np.ndarray
    schedule: str
    seed: int

    @property
    def final(self) -> float:
        return float(self.running_frequency[-1])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(["round", "frequency"])
        for r, f in enumerate(self.running_frequency, start=1):
            w.writerow([r, f"{f:.12g}"])
        return buf.getvalue()


def repeated_game(
    alice: CoverageFunction,
    R: int,
    seed: int = 0,
    schedule: Optional[Callable[[int], object]] = None,
    schedule_name: Optional[str] = None,
) -> RepeatedGameTrace:
    """Play rounds ``1..R``; round ``r`` uses ``schedule(r)`` and stream ``r``.

    The default schedule is ``consecutive_uniform(r)``, Bob's minimax mixture
    of the game on ``{1, ..., r + 1}``.
    """
    if R < 1:
        raise ValueError("R must be positive")
    if schedule is None:
        schedule, schedule_name = consecutive_uniform, "consecutive_uniform(r)"
    wins = np.empty(R, dtype=bool)
    for r in range(1, R + 1):
        wins[r - 1] = play_rounds(schedule(r), alice, RngStream(seed, r), 1)[0]
    freq = np.cumsum(wins) / np.arange(1, R + 1)
    return RepeatedGameTrace(R, freq, schedule_name or "custom", seed)


def harmonic(R: int) -> float:
    return float(np.sum(1.0 / np.arange(1, R + 1)))


def repeated_game_bound(R: int, z: float = 3.0) -> float:
    """``1/2 + H_R / (2R) + z sqrt(1/(4R))``."""
    return 0.5 + harmonic(R) / (2 * R) + z * math.sqrt(0.25 / R)


@dataclass
class RankRow:
    k: int
    p_tail: float
    p_tail_given: float
    n_cond: int


def rank_experiment(
    n: int,
    threshold: ThresholdDistribution,
    N: int,
    seed: int = 0,
    workers: int = 1,
) -> list[RankRow]:
    """Tail probabilities of the rank of ``X_1`` among ``n`` iid uniforms,
    unconditionally and given ``X_1 >= T``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    jobs = _shards(N, SHARD)

    def run(job):
        rng = RngStream(seed, job[0])
        x = rng.gen.random((job[1], n))
        t = threshold.sample(rng.gen, job[1])
        rank = np.sum(x <= x[:, :1], axis=1)
        cond = x[:, 0] >= t
        tail = np.array([np.count_nonzero(rank > k) for k in range(1, n)])
        tail_c = np.array([np.count_nonzero((rank > k) & cond) for k in range(1, n)])
        return tail, tail_c, np.count_nonzero(cond)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(run, jobs))
    else:
        parts = [run(j) for j in jobs]
    tail = sum(p[0] for p in parts)
    tail_c = sum(p[1] for p in parts)
    n_cond = sum(p[2] for p in parts)
    if n_cond == 0:
        raise DegenerateConditioning("no trial had X_1 >= T")
    return [
        RankRow(k, tail[k - 1] / N, tail_c[k - 1] / n_cond, int(n_cond))
        for k in range(1, n)
    ]


def training_sample_sim(
    N: int, seed: int = 0, dist: str = "uniform", workers: int = 1
) -> MonteCarloEstimate:
    """Three exchangeable cards; the first is a threshold for the second
    against the hidden third."""
    draw = {
        "uniform": lambda g, s: g.random(s),
        "exponential": lambda g, s: g.exponential(1.0, s),
        "normal": lambda g, s: g.normal(0.0, 1.0, s),
    }[dist]

    def count(rng, n):
        t, x, y = draw(rng.gen, (3, n))
        if np.any((t == x) | (x == y) | (t == y)):
            raise RuntimeError("tie among continuous draws")
        return np.count_nonzero((x >= t) == (x > y))

    return run_sharded(count, N, seed, workers)


def exchangeability_test(
    bob, N: int = 200_000, seed: int = 0, cuts: int = 4, z: float = 4.0
) -> tuple[bool, float]:
    """Compare ``P(shown in I, hidden in J)`` with ``P(hidden in I, shown in J)``
    on rectangles from pooled quantile cut points.

    Returns ``(passed, worst standardised difference)``.
    """
    rng = RngStream(seed, 0)
    s, h = bob.sample(rng, N)
    s, h = np.asarray(s, float), np.asarray(h, float)
    pooled = np.concatenate([s, h])
    edges = np.unique(np.quantile(pooled, np.linspace(0, 1, cuts + 1)))
    edges[-1] = np.inf
    edges[0] = -np.inf
    ci = np.searchsorted(edges, s, side="right") - 1
    hi_ = np.searchsorted(edges, h, side="right") - 1
    worst = 0.0
    nb = edges.size - 1
    for i in range(nb):
        for j in range(i + 1, nb):
            d = ((ci == i) & (hi_ == j)).astype(float) - ((hi_ == i) & (ci == j))
            sd = d.std() / math.sqrt(N)
            if sd == 0:
                continue
            worst = max(worst, abs(d.mean()) / sd)
    return worst <= z, worst


def estimate_to_json(e: MonteCarloEstimate) -> str:
    return json.dumps(e.to_dict())
