"""Alice's guessing strategies as coverage functions.

Every strategy in this module is summarised by its coverage function, since
that is all the win probability against an exchangeable pair depends on::

    P(win | a < b) = 1/2 + (F(b) - F(a)) / 2
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import special

from .core import (
    Constant,
    CoverageFunction,
    StepThreshold,
    Tri,
    as_generator,
    check_probability,
)

FULLY_SUPPORTED = ("logistic", "normal")
FAMILIES = ("point_mass", "discrete_uniform", "continuous_uniform") + FULLY_SUPPORTED


class UnknownClassification(UserWarning):
    """Grid evidence is consistent with a property the family cannot certify."""


@dataclass(frozen=True)
class ThresholdDistribution:
    """Distribution of a random threshold ``T``, with optional atoms at +-inf.

    ``T = -inf`` means always accept and ``T = +inf`` means always reject, so
    the atoms embed blind guessing into the threshold family.
    """

    family: str
    params: tuple
    p_minus: Real = 0
    p_plus: Real = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown threshold family {self.family!r}")
        check_probability(self.p_minus, "p_minus")
        check_probability(self.p_plus, "p_plus")
        if self.p_minus + self.p_plus > 1:
            raise ValueError("p_minus + p_plus must not exceed 1")
        if self.family in ("discrete_uniform", "continuous_uniform"):
            lo, hi = self.params
            if not lo <= hi:
                raise ValueError("need lo <= hi")
        if self.family in ("logistic", "normal") and not self.params[1] > 0:
            raise ValueError("scale must be positive")

    @classmethod
    def point_mass(cls, t, **atoms):
        return cls("point_mass", (t,), **atoms)

    @classmethod
    def discrete_uniform(cls, lo: int, hi: int, **atoms):
        return cls("discrete_uniform", (lo, hi), **atoms)

    @classmethod
    def continuous_uniform(cls, lo, hi, **atoms):
        return cls("continuous_uniform", (lo, hi), **atoms)

    @classmethod
    def logistic(cls, loc=0.0, scale=1.0, **atoms):
        return cls("logistic", (loc, scale), **atoms)

    @classmethod
    def normal(cls, mean=0.0, sd=1.0, **atoms):
        return cls("normal", (mean, sd), **atoms)

    @property
    def fully_supported(self) -> bool:
        return self.family in FULLY_SUPPORTED

    @property
    def finite_mass(self):
        return 1 - self.p_minus - self.p_plus

    def base_cdf_at(self, x):
        """CDF of the finite part; exact for point masses and discrete uniforms."""
        fam, par = self.family, self.params
        if fam == "point_mass":
            return 1 if x >= par[0] else 0
        if fam == "discrete_uniform":
            lo, hi = par
            j = math.floor(x)
            if j < lo:
                return 0
            if j >= hi:
                return 1
            return Fraction(j - lo + 1, hi - lo + 1)
        return float(self.base_cdf(np.asarray(x, dtype=float)))

    def base_cdf(self, x: np.ndarray) -> np.ndarray:
        fam, par = self.family, self.params
        x = np.asarray(x, dtype=float)
        if fam == "point_mass":
            return (x >= par[0]).astype(float)
        if fam == "discrete_uniform":
            lo, hi = par
            return np.clip((np.floor(x) - lo + 1) / (hi - lo + 1), 0.0, 1.0)
        if fam == "continuous_uniform":
            lo, hi = par
            if hi == lo:
                return (x >= lo).astype(float)
            return np.clip((x - lo) / (hi - lo), 0.0, 1.0)
        if fam == "logistic":
            return special.expit((x - par[0]) / par[1])
        return special.ndtr((x - par[0]) / par[1])

    def cdf_at(self, x):
        return self.p_minus + self.finite_mass * self.base_cdf_at(x)

    def cdf(self, x):
        return float(self.p_minus) + float(self.finite_mass) * self.base_cdf(x)

    def sample(self, rng, size=None) -> np.ndarray:
        gen = as_generator(rng)
        fam, par = self.family, self.params
        if fam == "point_mass":
            t = np.full(size, float(par[0]))
        elif fam == "discrete_uniform":
            t = gen.integers(par[0], par[1] + 1, size).astype(float)
        elif fam == "continuous_uniform":
            t = gen.uniform(par[0], par[1], size)
        elif fam == "logistic":
            t = gen.logistic(par[0], par[1], size)
        else:
            t = gen.normal(par[0], par[1], size)
        if self.p_minus or self.p_plus:
            u = gen.random(size)
            t = np.where(u < float(self.p_minus), -np.inf, t)
            t = np.where(u >= 1 - float(self.p_plus), np.inf, t)
        return t

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "params": list(self.params),
            "p_minus": self.p_minus,
            "p_plus": self.p_plus,
        }


@dataclass(frozen=True)
class DistributionCDF(CoverageFunction):
    """Randomised threshold strategy; its coverage function is the CDF of ``T``."""

    dist: ThresholdDistribution
    kind = "threshold"

    def at(self, x):
        return self.dist.cdf_at(x)

    def _eval(self, x):
        return self.dist.cdf(x)

    def limits(self):
        return (self.dist.p_minus, 1 - self.dist.p_plus)

    @property
    def nondecreasing(self):
        return True

    @property
    def strictly_increasing(self):
        return bool(self.dist.fully_supported and self.dist.finite_mass > 0)

    def params(self):
        return self.dist.to_dict()


@dataclass(frozen=True)
class Dual(CoverageFunction):
    """The strategy that always makes the opposite decision: ``1 - F``."""

    inner: CoverageFunction
    kind = "dual"

    def at(self, x):
        return 1 - self.inner.at(x)

    def _eval(self, x):
        return 1.0 - self.inner._eval(x)

    def limits(self):
        lim = self.inner.limits()
        return None if lim is None else (1 - lim[0], 1 - lim[1])

    @property
    def nondecreasing(self):
        const = self.inner.is_constant
        if const is None:
            return None
        # a nondecreasing non-constant inner function flips to decreasing
        return const

    @property
    def strictly_increasing(self):
        return False if self.inner.nondecreasing else None

    def params(self):
        return {"inner": self.inner}


@dataclass(frozen=True)
class Mixture(CoverageFunction):
    """Pick ``first`` with probability ``weight``, else ``second``."""

    weight: Real
    first: CoverageFunction
    second: CoverageFunction
    kind = "mixture"

    def __post_init__(self):
        check_probability(self.weight, "weight")

    def at(self, x):
        w = self.weight
        return w * self.first.at(x) + (1 - w) * self.second.at(x)

    def _eval(self, x):
        w = float(self.weight)
        return w * self.first._eval(x) + (1 - w) * self.second._eval(x)

    def limits(self):
        a, b = self.first.limits(), self.second.limits()
        if a is None or b is None:
            return None
        w = self.weight
        return (w * a[0] + (1 - w) * b[0], w * a[1] + (1 - w) * b[1])

    def _dual_slope(self):
        # F_w = (1 - w) + (2w - 1) F when second is the dual of first
        if isinstance(self.second, Dual) and self.second.inner == self.first:
            return 2 * self.weight - 1
        return None

    @property
    def nondecreasing(self):
        slope = self._dual_slope()
        if slope is not None:
            if slope > 0:
                return self.first.nondecreasing
            if slope == 0:
                return True
            const = self.first.is_constant
            return None if const is None else const
        if self.first.nondecreasing and self.second.nondecreasing:
            return True
        return None

    @property
    def strictly_increasing(self):
        slope = self._dual_slope()
        if slope is not None:
            if slope > 0:
                return self.first.strictly_increasing
            if slope == 0:
                return False
            return False if self.first.nondecreasing else None
        w = self.weight
        if w > 0 and self.first.strictly_increasing and self.second.nondecreasing:
            return True
        if w < 1 and self.second.strictly_increasing and self.first.nondecreasing:
            return True
        return None

    def params(self):
        return {"weight": self.weight, "first": self.first, "second": self.second}


@dataclass(frozen=True)
class PoissonCoverage(CoverageFunction):
    """Coverage of ``D = P + [0, 1]`` for a Poisson process ``P``.

    ``intensity`` is ``"homogeneous"`` (constant ``rate``) or
    ``"exponential"`` (intensity ``e^t``). A point ``x`` is uncovered iff
    there is no atom in ``[x - 1, x]``, so ``F(x) = 1 - exp(-Lambda(x))``.
    """

    intensity: str
    rate: float = 1.0
    kind = "poisson"

    def __post_init__(self):
        if self.intensity not in ("homogeneous", "exponential"):
            raise ValueError(f"unknown intensity {self.intensity!r}")
        if self.intensity == "homogeneous" and not self.rate > 0:
            raise ValueError("rate must be positive")

    def cumulative(self, x):
        """Mean number of atoms in ``[x - 1, x]``."""
        if self.intensity == "homogeneous":
            return self.rate * np.ones_like(np.asarray(x, dtype=float))
        return (1 - math.exp(-1)) * np.exp(x)

    def at(self, x):
        return float(1 - np.exp(-self.cumulative(float(x))))

    def _eval(self, x):
        return -np.expm1(-self.cumulative(x))

    def limits(self):
        if self.intensity == "homogeneous":
            c = -math.expm1(-self.rate)
            return (c, c)
        return (0, 1)

    @property
    def nondecreasing(self):
        return True

    @property
    def strictly_increasing(self):
        return self.intensity == "exponential"

    def params(self):
        if self.intensity == "homogeneous":
            return {"intensity": "homogeneous", "rate": self.rate}
        return {"intensity": "exponential"}


@dataclass(frozen=True)
class PiecewiseLinear(CoverageFunction):
    """Linear interpolation between knots, constant beyond the end knots."""

    knots: tuple
    kind = "piecewise_linear"

    def __post_init__(self):
        xs = [k[0] for k in self.knots]
        if len(xs) < 1 or any(b <= a for a, b in zip(xs, xs[1:])):
            raise ValueError("knots need strictly increasing x")
        for _, y in self.knots:
            check_probability(y, "knot value")

    def at(self, x):
        return float(self._eval(np.asarray(float(x))))

    def _eval(self, x):
        xs, ys = zip(*self.knots)
        return np.interp(x, xs, ys)

    def limits(self):
        return (self.knots[0][1], self.knots[-1][1])

    @property
    def nondecreasing(self):
        ys = [k[1] for k in self.knots]
        return all(b >= a for a, b in zip(ys, ys[1:]))

    @property
    def strictly_increasing(self):
        return False

    def params(self):
        return {"knots": [list(k) for k in self.knots]}


@dataclass(frozen=True)
class LatticeTable(CoverageFunction):
    """Coverage on the integers ``lo, ..., lo + len(values) - 1``.

    Outside the window values clamp to the end entries; between integers the
    function is evaluated at ``floor(x)`` (right-continuous).
    """

    lo: int
    values: tuple
    kind = "lattice"

    def __post_init__(self):
        if not self.values:
            raise ValueError("empty lattice table")
        for v in self.values:
            check_probability(v, "coverage value")

    @property
    def hi(self) -> int:
        return self.lo + len(self.values) - 1

    def at(self, x):
        j = min(max(math.floor(x), self.lo), self.hi)
        return self.values[j - self.lo]

    def _eval(self, x):
        idx = np.clip(np.floor(x), self.lo, self.hi).astype(np.int64) - self.lo
        return np.asarray(self.values, dtype=float)[idx]

    def limits(self):
        return (self.values[0], self.values[-1])

    @property
    def nondecreasing(self):
        v = self.values
        return all(b >= a for a, b in zip(v, v[1:]))

    @property
    def strictly_increasing(self):
        # constant beyond the window
        return False

    @property
    def window_strictly_increasing(self) -> bool:
        v = self.values
        return all(b > a for a, b in zip(v, v[1:]))

    def params(self):
        return {"lo": self.lo, "values": list(self.values)}


@dataclass(frozen=True)
class FunctionCoverage(CoverageFunction):
    """Arbitrary user function; no flags can be certified."""

    func: Callable
    description: str = "custom"
    kind = "function"

    def at(self, x):
        return self.func(x)

    def params(self):
        return {"description": self.description}


def blind(p) -> Constant:
    return Constant(p)


def random_threshold(d: ThresholdDistribution) -> CoverageFunction:
    if d.family == "point_mass" and not d.p_minus and not d.p_plus:
        return StepThreshold(d.params[0])
    return DistributionCDF(d)


def dual(F: CoverageFunction) -> CoverageFunction:
    if isinstance(F, Constant):
        return Constant(1 - F.p)
    if isinstance(F, Dual):
        return F.inner
    return Dual(F)


def gamma_mixture(F: CoverageFunction, gamma) -> CoverageFunction:
    """``gamma F + (1 - gamma)(1 - F)``: threshold mixed with its dual."""
    check_probability(gamma, "gamma")
    if gamma == 1:
        return F
    if gamma == 0:
        return dual(F)
    if 2 * gamma == 1:
        return Constant(Fraction(1, 2))
    return Mixture(gamma, F, Dual(F))


def poisson_coverage(kind: str, rate: float = 1.0) -> PoissonCoverage:
    return PoissonCoverage(kind, rate)


def sample_poisson_decision_set(
    F: PoissonCoverage, window: tuple, rng
) -> list[tuple[float, float]]:
    """Realise ``D = P + [0, 1]`` restricted to ``window``.

    Atoms are sampled on ``[lo - 1, hi]`` so intervals reaching into the
    window from the left are not lost. Returns sorted disjoint intervals.
    """
    gen = as_generator(rng)
    lo, hi = window
    a, b = lo - 1.0, float(hi)
    if F.intensity == "homogeneous":
        mean = F.rate * (b - a)
        atoms = gen.uniform(a, b, gen.poisson(mean))
    else:
        # intensity e^t: mass e^b - e^a, inverse CDF t = log(e^a + u (e^b - e^a))
        mean = math.exp(b) - math.exp(a)
        u = gen.random(gen.poisson(mean))
        atoms = np.log(math.exp(a) + u * mean)
    intervals = []
    for s in np.sort(atoms):
        left, right = max(s, lo), min(s + 1.0, hi)
        if right < left:
            continue
        if intervals and left <= intervals[-1][1]:
            intervals[-1] = (intervals[-1][0], max(intervals[-1][1], right))
        else:
            intervals.append((left, right))
    return [(float(l), float(r)) for l, r in intervals]


def covers(intervals: Sequence[tuple[float, float]], x: float) -> bool:
    return any(l <= x <= r for l, r in intervals)


def lattice_bernoulli(F: LatticeTable, rng) -> set[int]:
    """Include each window site ``j`` independently with probability ``F(j)``."""
    gen = as_generator(rng)
    p = np.asarray(F.values, dtype=float)
    keep = gen.random(p.size) < p
    return {F.lo + int(i) for i in np.flatnonzero(keep)}


def q_lattice(q: float, lo: int = -10, hi: int = 10) -> LatticeTable:
    """Strictly increasing lattice coverage ``1 / (1 + q^j)``, ``0 < q < 1``.

    Stands in for the q-deformed Bernoulli configuration; only its coverage
    function matters for win probabilities.
    """
    if not 0 < q < 1:
        raise ValueError("need 0 < q < 1")
    return LatticeTable(lo, tuple(1.0 / (1.0 + q**j) for j in range(lo, hi + 1)))


@dataclass(frozen=True)
class Classification:
    minimax: Tri
    strongly_dominant: Tri
    proper: Tri
    superminimax: Tri
    certified: bool

    def as_dict(self):
        return {
            "minimax": self.minimax,
            "strongly_dominant": self.strongly_dominant,
            "proper": self.proper,
            "superminimax": self.superminimax,
            "certified": self.certified,
        }


def _and3(a: Tri, b: Tri) -> Tri:
    if a is False or b is False:
        return False
    if a is None or b is None:
        return None
    return True


def classify(F: CoverageFunction, grid: Sequence[float]) -> Classification:
    """Minimax / strong dominance / properness / superminimax of ``F``.

    Analytic flags are used where the family certifies them. Otherwise the
    grid can refute monotonicity (an inversion ``F(a) > F(b)``, ``a < b``)
    but never certify it, and properness is judged from the grid extremes
    with tolerance 1e-6.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size < 2 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be sorted with at least two points")
    nondec, strict, proper = F.nondecreasing, F.strictly_increasing, F.proper
    certified = nondec is not None and strict is not None and proper is not None
    if not certified:
        vals = F(grid)
        steps = np.diff(vals)
        if nondec is None and np.any(steps < 0):
            nondec = False
        if strict is None and (np.any(steps <= 0) or nondec is False):
            strict = False
        if proper is None:
            proper = bool(vals[0] <= 1e-6 and vals[-1] >= 1 - 1e-6)
        if nondec is None or strict is None:
            warnings.warn(
                f"{F.kind}: grid cannot certify monotonicity", UnknownClassification
            )
    return Classification(
        minimax=nondec,
        strongly_dominant=strict,
        proper=proper,
        superminimax=_and3(strict, proper),
        certified=certified,
    )
