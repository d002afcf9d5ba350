"""Bob's number-writing strategies.

Discrete strategies keep their joint law exactly (ints / Fractions survive),
so :mod:`guessgame.analysis` can evaluate them in rational arithmetic.
Continuous strategies are samplers plus whatever closed forms are known.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from numbers import Real
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from .core import InvalidPair, NumberPair, as_generator


class DiscreteBobStrategy:
    """Finite joint law of ``(shown, hidden)``.

    Exchangeable strategies are mixtures of unordered pairs ``a < b`` with
    weights; each chosen pair is shown in random order. ``zero_pm_one`` is
    the one non-exchangeable strategy and is built from ordered outcomes.

    ``pairs`` may be supplied lazily (a zero-argument callable) together with
    a fast ``sampler(gen, size) -> (a, b)`` for strategies with huge support,
    which keeps the repeated game cheap.
    """

    def __init__(
        self,
        pairs=None,
        *,
        outcomes=None,
        description: str = "",
        sampler: Optional[Callable] = None,
        descriptor: Optional[dict] = None,
    ):
        if (pairs is None) == (outcomes is None):
            raise ValueError("give exactly one of pairs / outcomes")
        self.exchangeable = pairs is not None
        self.description = description
        self.descriptor = descriptor or {"kind": "discrete"}
        self._pair_sampler = sampler
        if self.exchangeable:
            if callable(pairs):
                self._pairs_factory = pairs
            else:
                pairs = tuple(tuple(p) for p in pairs)
                _validate_pairs(pairs)
                self._pairs_factory = lambda: pairs
        else:
            outcomes = tuple(tuple(o) for o in outcomes)
            _check_weights([o[2] for o in outcomes])
            self._outcomes = outcomes

    def __repr__(self):
        return f"DiscreteBobStrategy({self.description or self.descriptor})"

    @cached_property
    def pairs(self) -> tuple:
        """``(a, b, weight)`` entries with ``a < b``; exchangeable only."""
        if not self.exchangeable:
            raise AttributeError("non-exchangeable strategy has no pair form")
        return self._pairs_factory()

    @cached_property
    def outcomes(self) -> tuple:
        """Ordered joint law as ``(shown, hidden, probability)`` entries."""
        if not self.exchangeable:
            return self._outcomes
        half = Fraction(1, 2)
        out = []
        for a, b, w in self.pairs:
            out.append((b, a, w * half))
            out.append((a, b, w * half))
        return tuple(out)

    @cached_property
    def _float_table(self):
        if self.exchangeable:
            a, b, w = (np.array([float(v) for v in col]) for col in zip(*self.pairs))
        else:
            a, b, w = (
                np.array([float(v) for v in col]) for col in zip(*self._outcomes)
            )
        return a, b, w / w.sum()

    def sample(self, rng, size: int):
        gen = as_generator(rng)
        if self.exchangeable:
            if self._pair_sampler is not None:
                a, b = self._pair_sampler(gen, size)
            else:
                lo, hi, w = self._float_table
                idx = gen.choice(w.size, size=size, p=w)
                a, b = lo[idx], hi[idx]
            flip = gen.random(size) < 0.5
            return np.where(flip, b, a), np.where(flip, a, b)
        s, h, w = self._float_table
        idx = gen.choice(w.size, size=size, p=w)
        return s[idx], h[idx]

    def sample_pair(self, rng) -> NumberPair:
        s, h = self.sample(rng, 1)
        return NumberPair(float(s[0]), float(h[0]))


def _check_weights(weights):
    for w in weights:
        if w < 0:
            raise ValueError("negative weight")
    total = sum(weights)
    if abs(total - 1) > 1e-12:
        raise ValueError(f"weights sum to {total}, not 1")


def _validate_pairs(pairs):
    for a, b, _ in pairs:
        if not a < b:
            raise InvalidPair(f"need a < b, got ({a!r}, {b!r})")
    _check_weights([p[2] for p in pairs])


@dataclass(frozen=True)
class ContinuousBobStrategy:
    """Sampler-backed strategy with optional closed forms.

    ``sampler(gen, size)`` returns ``(shown, hidden, latent)``; ``latent`` is
    the mixing parameter (location or scale) or ``None``, exposed for oracle
    tests through :meth:`sample_with_latent`.
    """

    sampler: Callable
    description: str
    analytic_pi: Optional[Callable] = None
    marginal_density: Optional[Callable] = None
    support: Optional[tuple] = None
    breakpoints: tuple = ()
    conditional_cdf: Optional[Callable] = None
    exchangeable: bool = True
    descriptor: dict = field(default_factory=dict)

    def sample_with_latent(self, rng, size: int):
        return self.sampler(as_generator(rng), size)

    def sample(self, rng, size: int):
        shown, hidden, _ = self.sampler(as_generator(rng), size)
        return shown, hidden

    def sample_pair(self, rng) -> NumberPair:
        s, h = self.sample(rng, 1)
        return NumberPair(float(s[0]), float(h[0]))


def pure_pair(a, b) -> DiscreteBobStrategy:
    if not a < b:
        raise InvalidPair(f"need a < b, got ({a!r}, {b!r})")
    return DiscreteBobStrategy(
        [(a, b, Fraction(1))],
        description=f"pure pair ({a}, {b})",
        descriptor={"kind": "pure_pair", "params": {"a": a, "b": b}},
    )


def mixture_of_pairs(pairs: Sequence) -> DiscreteBobStrategy:
    return DiscreteBobStrategy(
        pairs,
        description="mixture of pairs",
        descriptor={"kind": "discrete", "params": {"pairs": [list(p) for p in pairs]}},
    )


def scaled_consecutive(m: int, k: int) -> DiscreteBobStrategy:
    """Pairs ``(beta k, (beta + 1) k)``, ``beta`` uniform on ``1..m``.

    The gap ``|X - Y| = k`` can be huge while a random threshold still rarely
    separates the pair; ``k = 1`` is :func:`consecutive_uniform`.
    """
    if m < 1 or k < 1:
        raise ValueError("need m, k >= 1")
    w = Fraction(1, m)

    def sampler(gen, size):
        beta = gen.integers(1, m + 1, size)
        return beta * k, (beta + 1) * k

    return DiscreteBobStrategy(
        lambda: tuple((beta * k, (beta + 1) * k, w) for beta in range(1, m + 1)),
        sampler=sampler,
        description=f"scaled consecutive m={m} k={k}",
        descriptor={"kind": "scaled_consecutive", "params": {"m": m, "k": k}},
    )


def consecutive_uniform(m: int) -> DiscreteBobStrategy:
    """Bob's minimax strategy in the game on ``{1, ..., m + 1}``."""
    bob = scaled_consecutive(m, 1)
    bob.description = f"consecutive uniform m={m}"
    bob.descriptor = {"kind": "consecutive_uniform", "params": {"m": m}}
    return bob


def modular_three(weights: Mapping[int, Real]) -> DiscreteBobStrategy:
    """Pairs ``(3j, 3j + 1)``; the residue mod 3 gives the answer away."""
    items = sorted((int(j), w) for j, w in weights.items() if w)
    return DiscreteBobStrategy(
        [(3 * j, 3 * j + 1, w) for j, w in items],
        description="modular three",
        descriptor={
            "kind": "modular_three",
            "params": {"weights": {str(j): w for j, w in items}},
        },
    )


def zero_pm_one() -> DiscreteBobStrategy:
    """Show 0, hide +-1. Not exchangeable: unconstrained game only."""
    half = Fraction(1, 2)
    return DiscreteBobStrategy(
        outcomes=[(0, 1, half), (0, -1, half)],
        description="zero vs +-1 (unconstrained game)",
        descriptor={"kind": "zero_pm_one", "params": {}},
    )


def iid_uniform_pair() -> ContinuousBobStrategy:
    def sampler(gen, size):
        u = gen.random((2, size))
        return u[0], u[1], None

    return ContinuousBobStrategy(
        sampler,
        "iid uniform [0, 1]",
        analytic_pi=lambda x: float(np.clip(x, 0.0, 1.0)),
        marginal_density=lambda x: 1.0 if 0 <= x <= 1 else 0.0,
        support=(0.0, 1.0),
        conditional_cdf=lambda y, x: float(np.clip(y, 0.0, 1.0)),
        descriptor={"kind": "iid_uniform_pair", "params": {}},
    )


def location_uniform(m: float) -> ContinuousBobStrategy:
    """``X = B + U1``, ``Y = B + U2``, ``B ~ U[-m, m]``, ``U_i ~ U[0, 1]`` iid.

    Given ``X = x`` the offset ``U1 = x - B`` is uniform on the part of
    ``[0, 1]`` compatible with ``|B| <= m``, and ``pi(x) = E[U1 | X = x]``.
    """
    if not m > 0:
        raise ValueError("need m > 0")

    def sampler(gen, size):
        b = gen.uniform(-m, m, size)
        u = gen.random((2, size))
        return b + u[0], b + u[1], b

    def u1_range(x):
        return max(0.0, x - m), min(1.0, x + m)

    def pi(x):
        lo, hi = u1_range(x)
        return (lo + hi) / 2 if hi > lo else float(x > 0)

    def density(x):
        lo, hi = u1_range(x)
        return max(hi - lo, 0.0) / (2 * m)

    return ContinuousBobStrategy(
        sampler,
        f"location mixture m={m}",
        analytic_pi=pi,
        marginal_density=density,
        support=(-m, m + 1.0),
        breakpoints=(-m + 1.0, m),
        descriptor={"kind": "location_uniform", "params": {"m": m}},
    )


def scale_inverse_cdf(u, m: float):
    """Inverse CDF of the log-uniform scale on ``(1/m, m)``: ``m^(2u - 1)``."""
    return np.power(m, 2 * np.asarray(u, dtype=float) - 1)


def scale_uniform_twocards(m: float) -> ContinuousBobStrategy:
    """``X = A U1``, ``Y = A U2`` with ``A`` log-uniform on ``(1/m, m)``.

    Given ``X = x`` the scale has density proportional to ``a^-2`` on
    ``(max(x, 1/m), m)``, and ``pi(x) = E[min(1, x / A) | X = x]``.
    """
    if not m > 1:
        raise ValueError("need m > 1")
    log_m = math.log(m)

    def sampler(gen, size):
        a = scale_inverse_cdf(gen.random(size), m)
        u = gen.random((2, size))
        return a * u[0], a * u[1], a

    def pi(x):
        if x <= 0:
            return 0.0
        if x >= m:
            return 1.0
        if x >= 1 / m:
            return (1 + x / m) / 2
        return x * (m + 1 / m) / 2

    def density(x):
        if x <= 0 or x >= m:
            return 0.0
        return (1 / max(x, 1 / m) - 1 / m) / (2 * log_m)

    return ContinuousBobStrategy(
        sampler,
        f"log-uniform scale mixture m={m:g}",
        analytic_pi=pi,
        marginal_density=density,
        support=(0.0, float(m)),
        breakpoints=(1 / m, 1.0),
        descriptor={"kind": "scale_uniform_twocards", "params": {"m": m}},
    )


def arrangement_closest_to_half() -> ContinuousBobStrategy:
    """Given two iid uniforms, show the one closer to 1/2."""

    def sampler(gen, size):
        u = gen.random((2, size))
        first_closer = np.abs(u[0] - 0.5) <= np.abs(u[1] - 0.5)
        shown = np.where(first_closer, u[0], u[1])
        hidden = np.where(first_closer, u[1], u[0])
        return shown, hidden, None

    # Bob picks the order, so the pair is not exchangeable
    return ContinuousBobStrategy(
        sampler,
        "arrangement: show the number closer to 1/2",
        analytic_pi=lambda x: 0.5,
        marginal_density=lambda x: 2 * (1 - abs(2 * x - 1)) if 0 <= x <= 1 else 0.0,
        support=(0.0, 1.0),
        breakpoints=(0.5,),
        exchangeable=False,
        descriptor={"kind": "arrangement_closest_to_half", "params": {}},
    )
