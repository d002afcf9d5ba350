"""Shared domain types and the single-round game engine.

Alice's strategies are represented by their coverage function ``F``: the
probability of accepting an observed number ``x`` as the larger one.
Bob's strategies are anything with a ``sample(rng, size)`` method returning
``(shown, hidden)`` arrays (see :mod:`guessgame.bob`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Optional

import numpy as np

Tri = Optional[bool]
"""Three-valued flag: True (yes), False (no), None (unknown)."""


class TieError(ValueError):
    """Bob produced equal shown and hidden numbers."""


class InvalidPair(ValueError):
    """A pure pair ``(a, b)`` violated ``a < b``."""


def check_probability(p, name: str = "p"):
    if not 0 <= p <= 1:
        raise ValueError(f"{name} must lie in [0, 1], got {p!r}")
    return p


@dataclass(frozen=True)
class NumberPair:
    shown: Real
    hidden: Real

    def __post_init__(self):
        if self.shown == self.hidden:
            raise TieError(f"tie at {self.shown!r}")


@dataclass(frozen=True)
class RoundOutcome:
    shown: Real
    hidden: Real
    accepted: bool
    correct: bool


@dataclass
class RngStream:
    """A reproducible random stream keyed by ``(seed, stream_id)``.

    Distinct stream ids give independent streams (numpy ``SeedSequence``
    spawn keys), so Monte Carlo shards and repeated-game rounds can each own
    one without coordinating.
    """

    seed: int = 0
    stream_id: int = 0
    gen: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_id,))
        self.gen = np.random.Generator(np.random.PCG64(ss))

    def child(self, stream_id: int) -> "RngStream":
        return RngStream(self.seed, stream_id)

    def random(self, size=None):
        return self.gen.random(size)


def as_generator(rng) -> np.random.Generator:
    if isinstance(rng, RngStream):
        return rng.gen
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def _scalar_or_array(x, values):
    if np.ndim(x) == 0:
        return float(values)
    return values


class CoverageFunction:
    """Accept-probability function ``F: R -> [0, 1]`` of a guessing strategy.

    Subclasses implement ``at`` (scalar, exact for rational inputs where the
    family allows it) and ``_eval`` (vectorised float evaluation). Flags are
    three-valued; ``proper`` is derived from ``limits`` when those are known.
    """

    kind: str = "abstract"

    def at(self, x):
        raise NotImplementedError

    def _eval(self, x: np.ndarray) -> np.ndarray:
        return np.vectorize(lambda v: float(self.at(v)), otypes=[float])(x)

    def __call__(self, x):
        arr = np.asarray(x, dtype=float)
        return _scalar_or_array(x, self._eval(arr))

    def limits(self) -> Optional[tuple]:
        """``(F(-inf), F(+inf))`` when known analytically."""
        return None

    @property
    def nondecreasing(self) -> Tri:
        return None

    @property
    def strictly_increasing(self) -> Tri:
        return None

    @property
    def proper(self) -> Tri:
        lim = self.limits()
        if lim is None:
            return None
        lo, hi = lim
        return bool(abs(lo) <= 1e-12 and abs(hi - 1) <= 1e-12)

    @property
    def is_constant(self) -> Tri:
        lim = self.limits()
        if self.nondecreasing and lim is not None:
            return bool(lim[0] == lim[1])
        return None

    def flags(self) -> dict:
        return {
            "nondecreasing": self.nondecreasing,
            "strictly_increasing": self.strictly_increasing,
            "proper": self.proper,
        }

    def params(self) -> dict:
        return {}

    def decide(self, x, rng) -> np.ndarray:
        """Vectorised randomised decisions: accept with probability ``F(x)``."""
        gen = as_generator(rng)
        x = np.asarray(x, dtype=float)
        return gen.random(x.shape) < self._eval(x)


@dataclass(frozen=True)
class Constant(CoverageFunction):
    """Blind guessing: accept with probability ``p`` whatever is observed."""

    p: Real
    kind = "constant"

    def __post_init__(self):
        check_probability(self.p)

    def at(self, x):
        return self.p

    def _eval(self, x):
        return np.full(x.shape, float(self.p))

    def limits(self):
        return (self.p, self.p)

    @property
    def nondecreasing(self):
        return True

    @property
    def strictly_increasing(self):
        return False

    def params(self):
        return {"p": self.p}


@dataclass(frozen=True)
class StepThreshold(CoverageFunction):
    """Pure threshold strategy: accept iff ``x >= t``."""

    t: Real
    kind = "step"

    def at(self, x):
        return 1 if x >= self.t else 0

    def _eval(self, x):
        return (x >= self.t).astype(float)

    def limits(self):
        return (0, 1)

    @property
    def nondecreasing(self):
        return True

    @property
    def strictly_increasing(self):
        return False

    def params(self):
        return {"t": self.t}

    def decide(self, x, rng=None):
        return np.asarray(x, dtype=float) >= self.t


def decide(F: CoverageFunction, x, rng) -> bool:
    """Accept ``x`` with probability exactly ``F(x)``."""
    if isinstance(F, StepThreshold):
        return bool(x >= F.t)
    p = float(F.at(x))
    if p >= 1.0:
        return True
    if p <= 0.0:
        return False
    return bool(as_generator(rng).random() < p)


def play_round(bob, alice: CoverageFunction, rng) -> RoundOutcome:
    shown, hidden = bob.sample(rng, 1)
    shown, hidden = shown[0], hidden[0]
    if shown == hidden:
        raise TieError(f"Bob emitted a tie at {shown!r}")
    accepted = decide(alice, shown, rng)
    correct = accepted == (shown > hidden)
    return RoundOutcome(shown, hidden, accepted, bool(correct))


def play_rounds(bob, alice: CoverageFunction, rng, n: int) -> np.ndarray:
    """Play ``n`` independent rounds; returns the boolean win indicators."""
    shown, hidden = bob.sample(rng, n)
    shown = np.asarray(shown, dtype=float)
    hidden = np.asarray(hidden, dtype=float)
    if np.any(shown == hidden):
        raise TieError("Bob emitted a tie")
    accepted = alice.decide(shown, rng)
    return accepted == (shown > hidden)


def exact(value):
    """Coerce ints to Fraction so exact arithmetic stays exact."""
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return Fraction(int(value))
    return value
