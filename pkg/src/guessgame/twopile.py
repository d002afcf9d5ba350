"""The two-pile game.

``n`` distinct numbers are shuffled into piles of ``k`` (Alice's) and
``n - k``. Alice sees her pile and guesses whether the overall maximum is in
her hand. Bob's strategy here is a scale mixture of uniforms, ``Z_j = A U_j``,
whose joint density depends only on the sample maximum through

    g_m(x) = int_x^inf a^-m h(a) da,
    h(a) = c a^(delta-1) on (0, 1),  c a^(-delta-1) on [1, inf),  c = delta/2.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy import integrate, optimize

from .core import as_generator


class NonPositive(ValueError):
    """Density or ``g`` evaluated at a non-positive point."""


class QuadratureNonconvergence(RuntimeError):
    pass


@dataclass(frozen=True)
class PileConfig:
    n: int
    k: int

    def __post_init__(self):
        if self.n < 2 or not 1 <= self.k <= self.n - 1:
            raise ValueError(f"need n >= 2 and 1 <= k <= n - 1, got {self}")

    @property
    def symmetric(self) -> bool:
        return 2 * self.k == self.n

    @property
    def ratio(self) -> float:
        return self.k / self.n


@dataclass(frozen=True)
class ScaleMixtureModel:
    delta: float
    c: Optional[float] = None

    def __post_init__(self):
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if self.c is None:
            object.__setattr__(self, "c", self.delta / 2)


@dataclass
class TwoPileDeal:
    """One deal, stored in log space.

    Small ``delta`` makes the scale astronomically heavy-tailed (``A`` exceeds
    the float range with probability around ``delta``), so deals are generated
    as ``log z``; ``exp`` only preserves order, so decisions are unaffected.
    """

    log_scale: float
    log_alice: np.ndarray
    log_bob: np.ndarray

    @property
    def scale(self) -> float:
        return float(np.exp(self.log_scale))

    @property
    def alice_values(self) -> np.ndarray:
        return np.exp(self.log_alice)

    @property
    def bob_pile_values(self) -> np.ndarray:
        return np.exp(self.log_bob)

    @property
    def log_x(self) -> float:
        return float(np.max(self.log_alice))

    @property
    def log_y(self) -> float:
        return float(np.max(self.log_bob))

    @property
    def x(self) -> float:
        return float(np.exp(self.log_x))

    @property
    def y(self) -> float:
        return float(np.exp(self.log_y))


# ---------------------------------------------------------------- iid case


def iid_value(cfg: PileConfig) -> float:
    r = cfg.k / cfg.n
    return r + (1 - r) * 2.0 ** (-cfg.k / (cfg.n - cfg.k))


def iid_median(cfg: PileConfig) -> float:
    """Median of the other pile's maximum for iid uniform numbers."""
    return 2.0 ** (-1.0 / (cfg.n - cfg.k))


def iid_value_of_ratio(r: float) -> float:
    return r + (1 - r) * 2.0 ** (-r / (1 - r))


def worst_ratio(tol: float = 1e-6) -> tuple[float, float]:
    """Pile ratio ``k/n`` minimising Alice's iid best-response value."""
    res = optimize.minimize_scalar(
        iid_value_of_ratio, bracket=(0.1, 0.5, 0.9), method="golden", tol=tol
    )
    return float(res.x), float(res.fun)


def iid_deals(cfg: PileConfig, size: int, rng):
    """Maxima ``(x, y)`` of both piles for iid uniform numbers."""
    gen = as_generator(rng)
    z = gen.random((size, cfg.n))
    return z[:, : cfg.k].max(axis=1), z[:, cfg.k :].max(axis=1)


# ----------------------------------------------------------- scale mixture


def h_density(a, model: ScaleMixtureModel):
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0):
        raise NonPositive("h is defined on a > 0")
    d, c = model.delta, model.c
    out = np.where(a < 1, c * a ** (d - 1), c * a ** (-d - 1))
    return float(out) if out.ndim == 0 else out


def h_inverse_cdf(u, model: ScaleMixtureModel):
    """Piecewise inverse CDF (half the mass on each side of 1)."""
    u = np.asarray(u, dtype=float)
    d = model.delta
    with np.errstate(divide="ignore"):
        lower = np.power(2 * u, 1 / d)
        upper = np.power(2 * (1 - u), -1 / d)
    out = np.where(u < 0.5, lower, upper)
    return float(out) if out.ndim == 0 else out


def h_sample(model: ScaleMixtureModel, rng, size=None):
    return h_inverse_cdf(as_generator(rng).random(size), model)


def log_h_sample(model: ScaleMixtureModel, rng, size=None):
    """``log A`` by the same inverse CDF, without overflow."""
    u = as_generator(rng).random(size)
    d = model.delta
    with np.errstate(divide="ignore"):
        lower = (math.log(2) + np.log(u)) / d
        upper = -(math.log(2) + np.log1p(-u)) / d
    return np.where(u < 0.5, lower, upper)


def _g_scaled_below_one(x, m: int, model: ScaleMixtureModel):
    """``x^(m - delta) g_m(x) / c`` for ``0 <= x < 1``; finite as ``x -> 0``."""
    d = model.delta
    return 1 / (m - d) - 2 * d * np.power(x, m - d) / (m * m - d * d)


def g_n_eval(x, n: int, model: ScaleMixtureModel):
    """Closed form of ``g_n``, continuous at ``x = 1``."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise NonPositive("g_n is defined on x > 0")
    d, c = model.delta, model.c
    with np.errstate(over="ignore"):
        above = c / (n + d) * np.power(x, -n - d)
        below = c / (n - d) * np.power(x, -n + d) - 2 * c * d / (n * n - d * d)
    out = np.where(x >= 1, above, below)
    return float(out) if out.ndim == 0 else out


def g_n_quadrature(x: float, n: int, model: ScaleMixtureModel) -> float:
    """``int_x^inf a^-n h(a) da`` numerically, split at ``a = 1``."""
    if x <= 0:
        raise NonPositive("g_n is defined on x > 0")
    f = lambda a: a ** (-n) * h_density(a, model)
    opts = dict(epsabs=0.0, epsrel=1e-13, limit=400)
    if x < 1:
        v1, _ = integrate.quad(f, x, 1.0, **opts)
        v2, _ = integrate.quad(f, 1.0, np.inf, **opts)
        return v1 + v2
    return integrate.quad(f, x, np.inf, **opts)[0]


def pi_nk(x, cfg: PileConfig, model: ScaleMixtureModel):
    """``P(X > Y | Alice's pile)``, a function of her maximum ``x`` only.

    Computed as ``x^(n-k) g_n(x) / g_k(x)``. Below 1 both ``g`` terms are
    rescaled by ``x^(m - delta)`` (the common factor cancels) so that the
    ratio stays finite down to ``x = 0``. The constant ``c`` cancels too.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise NonPositive("x must be positive")
    n, k, d = cfg.n, cfg.k, model.delta
    plateau = (k + d) / (n + d)
    xb = np.minimum(x, 1.0)
    below = _g_scaled_below_one(xb, n, model) / _g_scaled_below_one(xb, k, model)
    out = np.where(x >= 1, plateau, below)
    return float(out) if out.ndim == 0 else out


def pi_nk_direct(x: float, cfg: PileConfig, model: ScaleMixtureModel) -> float:
    """Literal ``x^(n-k) g_n(x) / g_k(x)`` (no rescaling); for moderate ``x``."""
    return x ** (cfg.n - cfg.k) * g_n_eval(x, cfg.n, model) / g_n_eval(x, cfg.k, model)


def pi_nk_log(log_x, cfg: PileConfig, model: ScaleMixtureModel):
    """:func:`pi_nk` as a function of ``log x``."""
    log_x = np.asarray(log_x, dtype=float)
    n, k, d = cfg.n, cfg.k, model.delta
    lx = np.minimum(log_x, 0.0)

    def scaled(m):
        return 1 / (m - d) - 2 * d * np.exp((m - d) * lx) / (m * m - d * d)

    out = np.where(log_x >= 0, (k + d) / (n + d), scaled(n) / scaled(k))
    return float(out) if out.ndim == 0 else out


def pi_limits(cfg: PileConfig, model: ScaleMixtureModel) -> tuple[float, float]:
    """``(lim_{x->0} pi, plateau for x >= 1)``."""
    n, k, d = cfg.n, cfg.k, model.delta
    return (k - d) / (n - d), (k + d) / (n + d)


def g_k_marginal_quadrature(x: float, cfg: PileConfig, model: ScaleMixtureModel):
    """Integrate ``n - k`` coordinates out of ``g_n(max)``:
    ``x^(n-k) g_n(x) + (n-k) int_x^inf y^(n-k-1) g_n(y) dy``."""
    n, k = cfg.n, cfg.k
    f = lambda y: y ** (n - k - 1) * g_n_eval(y, n, model)
    opts = dict(epsabs=0.0, epsrel=1e-12, limit=400)
    if x < 1:
        tail = integrate.quad(f, x, 1.0, **opts)[0] + integrate.quad(f, 1.0, np.inf, **opts)[0]
    else:
        tail = integrate.quad(f, x, np.inf, **opts)[0]
    return x ** (n - k) * g_n_eval(x, n, model) + (n - k) * tail


def _integrate_max_density(phi, m: int, model: ScaleMixtureModel, upper=np.inf):
    """``int_0^upper phi(x) m x^(m-1) g_m(x) dx``.

    Below 1, ``x = s^(1/delta)`` removes the ``x^(delta-1)`` singularity at 0;
    above 1, ``x = s^(-1/delta)`` maps the ``x^(-1-delta)`` tail onto a flat
    integrand on ``(0, 1]``.
    """
    d, c = model.delta, model.c
    opts = dict(epsabs=1e-14, epsrel=1e-12, limit=400)

    def lower_piece(s):
        x = s ** (1 / d)
        return phi(x) * m * c * _g_scaled_below_one(x, m, model) / d

    top = min(upper, 1.0)
    v1, e1 = integrate.quad(lower_piece, 0.0, top**d, **opts)
    v2, e2 = 0.0, 0.0
    if upper > 1:
        const = m * c / ((m + d) * d)

        def f(s):
            with np.errstate(over="ignore", divide="ignore"):
                return phi(float(np.power(np.float64(s), -1 / d))) * const

        s_up = 0.0 if upper == np.inf else upper ** -d
        v2, e2 = integrate.quad(f, s_up, 1.0, **opts)
    return v1 + v2, e1 + e2


def normalization(n: int, model: ScaleMixtureModel) -> float:
    """``n int_0^inf g_n(t) t^(n-1) dt``; equals 1 for a proper density."""
    v, _ = _integrate_max_density(lambda x: 1.0, n, model)
    return v


def max_cdf_quadrature(t: float, n: int, model: ScaleMixtureModel) -> float:
    """``P(max(Z_1..Z_n) <= t)``."""
    v, _ = _integrate_max_density(lambda x: 1.0, n, model, upper=t)
    return v


@dataclass
class EpsilonReport:
    passed: bool
    max_deviation: float
    n: int
    k: int
    x: float
    epsilon: float
    delta: float


def default_pi_grid() -> np.ndarray:
    return np.concatenate([[0.0], np.logspace(-12, 0, 241), [1.0, 10.0, 1e6]])


def epsilon_bound_check(
    N: int, eps: float, delta: float, grid: Optional[Sequence[float]] = None
) -> EpsilonReport:
    """Check ``|pi_{n,k}(x) - k/n| < eps`` for ``1 <= k < n <= N`` on a grid.

    The grid includes ``x = 0`` (the ``x -> 0`` limit, finite in the rescaled
    form) and the ``x >= 1`` plateau.
    """
    grid = default_pi_grid() if grid is None else np.asarray(grid, dtype=float)
    model = ScaleMixtureModel(delta)
    worst = (-1.0, 0, 0, 0.0)
    for n in range(2, N + 1):
        for k in range(1, n):
            dev = np.abs(pi_nk(grid, PileConfig(n, k), model) - k / n)
            i = int(np.argmax(dev))
            if dev[i] > worst[0]:
                worst = (float(dev[i]), n, k, float(grid[i]))
    dev, n, k, x = worst
    return EpsilonReport(dev < eps, dev, n, k, x, eps, delta)


def select_delta(eps: float) -> float:
    """Scale-mixture parameter for a target ``eps``.

    Deviations from ``k/n`` are at most ``delta`` on the plateau and
    ``delta / (1 - delta)`` near 0; this choice keeps both below ``eps``.
    """
    return min(eps / 2, 0.5 * eps * (1 - eps))


def deal(cfg: PileConfig, model: ScaleMixtureModel, rng) -> TwoPileDeal:
    """Sample ``a`` from ``h``, then ``n`` iid uniforms on ``[0, a]``."""
    gen = as_generator(rng)
    log_a = float(log_h_sample(model, gen))
    log_z = log_a + np.log(gen.random(cfg.n))
    return TwoPileDeal(log_a, log_z[: cfg.k], log_z[cfg.k :])


def deals(cfg: PileConfig, model: ScaleMixtureModel, size: int, rng):
    """Vectorised deals in log space: ``(log a, log z)``, ``log z`` of shape
    ``(size, n)``."""
    gen = as_generator(rng)
    log_a = log_h_sample(model, gen, size)
    log_z = log_a[:, None] + np.log(gen.random((size, cfg.n)))
    return log_a, log_z


def pile_maxima(log_z: np.ndarray, cfg: PileConfig):
    return log_z[:, : cfg.k].max(axis=1), log_z[:, cfg.k :].max(axis=1)


def best_response_decision(d: TwoPileDeal, cfg: PileConfig, model: ScaleMixtureModel):
    """Bet on Alice's pile iff ``pi_{n,k}(x) >= 1/2``."""
    return bool(pi_nk_log(d.log_x, cfg, model) >= 0.5)


def blind_decision(cfg: PileConfig, rng=None) -> bool:
    """Bet on the larger pile; a fair coin when the piles are equal."""
    if cfg.k != cfg.n - cfg.k:
        return cfg.k > cfg.n - cfg.k
    return bool(as_generator(rng).random() < 0.5)


def best_response_value_quadrature(cfg: PileConfig, model: ScaleMixtureModel) -> float:
    """``int max(pi, 1 - pi) k x^(k-1) g_k(x) dx`` split at ``x = 1``."""
    phi = lambda x: max(p := pi_nk(x, cfg, model), 1 - p)
    v, err = _integrate_max_density(phi, cfg.k, model)
    if err > 1e-6 * abs(v):
        raise QuadratureNonconvergence(f"relative error {err / v:.2e}")
    return v


def game_value(cfg: PileConfig) -> Fraction:
    return Fraction(max(cfg.k, cfg.n - cfg.k), cfg.n)


def deals_csv(
    cfg: PileConfig, model: ScaleMixtureModel, size: int, rng, out=None
) -> str:
    """One row per deal: a, z_1..z_n, x, y, decision, correct.

    ``decision`` is 1 when the best response bets on Alice's pile. Values are
    exponentiated from log space, so extreme deals print as 0 or inf; the
    decision columns come from the exact log-space comparison.
    """
    log_a, log_z = deals(cfg, model, size, rng)
    lx, ly = pile_maxima(log_z, cfg)
    accept = pi_nk_log(lx, cfg, model) >= 0.5
    correct = accept == (lx > ly)
    with np.errstate(over="ignore"):
        a, z, x, y = np.exp(log_a), np.exp(log_z), np.exp(lx), np.exp(ly)
    buf = out if out is not None else io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(["a"] + [f"z_{j + 1}" for j in range(cfg.n)] + ["x", "y", "decision", "correct"])
    for i in range(size):
        w.writerow(
            [f"{a[i]:.12g}"]
            + [f"{v:.12g}" for v in z[i]]
            + [f"{x[i]:.12g}", f"{y[i]:.12g}", int(accept[i]), int(correct[i])]
        )
    return buf.getvalue() if out is None else ""
