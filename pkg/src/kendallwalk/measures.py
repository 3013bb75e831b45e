"""Symmetric step distributions on the real line.

Every law here is symmetric about zero. Besides the usual ``cdf``/``sample``
pair, each family knows its radial transform ``G(t) = E(1 - |Y/t|^alpha)_+``
in closed form (the tabulated family falls back to quadrature), which is what
the rest of the package works with.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


def check_alpha(alpha) -> float:
    alpha = float(alpha)
    if not (alpha > 0 and math.isfinite(alpha)):
        raise ValueError(f"alpha must be positive and finite, got {alpha!r}")
    return alpha


@dataclass(frozen=True)
class RngStream:
    """A reproducible random stream identified by ``(master_seed, stream_index)``.

    Streams with different indices are statistically independent; the same
    pair always produces the same draws.
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        if self.stream_index < 0:
            raise ValueError("stream_index must be non-negative")

    def generator(self) -> np.random.Generator:
        seq = np.random.SeedSequence(self.master_seed, spawn_key=(self.stream_index,))
        return np.random.Generator(np.random.PCG64(seq))


def _as_float(t):
    return np.asarray(t, dtype=float)


def _unwrap(x):
    return float(x) if np.ndim(x) == 0 else x


def pareto_magnitude(u, p):
    """Inverse-transform draw ``u**(-1/p)`` of a Pareto(p) magnitude on ``[1, inf)``.

    ``u`` must lie in ``(0, 1]``.
    """
    return _as_float(u) ** (-1.0 / p)


def random_signs(rng: np.random.Generator, size) -> np.ndarray:
    return np.where(rng.random(size) < 0.5, -1.0, 1.0)


class StepDistribution:
    """Base class for symmetric laws.

    Subclasses implement the magnitude law (``_abs_cdf``, ``magnitude_ppf``)
    and the radial transform; the signed quantities are derived here.
    """

    #: mass of the atom at 0
    zero_atom = 0.0
    #: whether ``g``/``g_prime`` are closed forms
    closed_form = True

    # magnitude law |Y|, right-continuous and left-limit versions
    def _abs_cdf(self, r):
        raise NotImplementedError

    def _abs_cdf_left(self, r):
        return self._abs_cdf(r)

    def magnitude_ppf(self, q):
        """Quantile function of ``|Y|`` for ``q`` in ``[0, 1)``."""
        raise NotImplementedError

    @property
    def atoms(self) -> tuple[float, ...]:
        """Positive atom locations of ``|Y|`` (break points for quadrature)."""
        return ()

    def cdf(self, t):
        """``P(Y <= t)``."""
        t = _as_float(t)
        pos = 0.5 + 0.5 * self._abs_cdf(np.abs(t))
        neg = 0.5 - 0.5 * self._abs_cdf_left(np.abs(t))
        return _unwrap(np.where(t >= 0, pos, neg))

    def cdf_left(self, t):
        """``P(Y < t)``."""
        t = _as_float(t)
        pos = 0.5 + 0.5 * self._abs_cdf_left(np.abs(t))
        neg = 0.5 - 0.5 * self._abs_cdf(np.abs(t))
        out = np.where(t > 0, pos, neg)
        out = np.where(t == 0, 0.5 - 0.5 * self.zero_atom, out)
        return _unwrap(out)

    def sf(self, t):
        """``P(Y > t)`` for ``t >= 0`` without cancellation."""
        t = _as_float(t)
        return _unwrap(0.5 * (1.0 - self._abs_cdf(t)))

    def sample(self, rng: np.random.Generator, size=None):
        """Draw ``size`` values: a magnitude by inverse transform, then a fair sign."""
        q = rng.random(size)
        signs = random_signs(rng, size)
        return _unwrap(signs * self.magnitude_ppf(q))

    def alpha_moment(self, alpha) -> float:
        raise NotImplementedError

    # radial transform G(t) = nu_hat(1/t), t > 0
    def g(self, t, alpha):
        raise NotImplementedError

    def g_prime(self, t, alpha):
        raise NotImplementedError

    def g_complement(self, t, alpha):
        """``1 - G(t)``; overridden where a cancellation-free form exists."""
        return _unwrap(1.0 - _as_float(self.g(t, alpha)))


@dataclass(frozen=True)
class SymmetricTwoPoint(StepDistribution):
    """``(delta_x + delta_{-x}) / 2``; ``x = 0`` gives the point mass at 0."""

    x: float = 1.0

    def __post_init__(self):
        if not (self.x >= 0 and math.isfinite(self.x)):
            raise ValueError(f"two-point location must be >= 0, got {self.x!r}")

    @property
    def zero_atom(self):
        return 1.0 if self.x == 0 else 0.0

    @property
    def atoms(self):
        return (self.x,) if self.x > 0 else ()

    def _abs_cdf(self, r):
        return np.where(r >= self.x, 1.0, 0.0)

    def _abs_cdf_left(self, r):
        return np.where(r > self.x, 1.0, 0.0)

    def magnitude_ppf(self, q):
        return np.full(np.shape(q), self.x, dtype=float)

    def alpha_moment(self, alpha):
        return self.x ** check_alpha(alpha)

    def g(self, t, alpha):
        t = _as_float(t)
        return _unwrap(np.clip(1.0 - (self.x / t) ** alpha, 0.0, None))

    def g_complement(self, t, alpha):
        t = _as_float(t)
        return _unwrap(np.minimum(1.0, (self.x / t) ** alpha))

    def g_prime(self, t, alpha):
        # right derivative at the kink t = x
        t = _as_float(t)
        return _unwrap(np.where(t >= self.x, alpha * self.x**alpha * t ** (-alpha - 1.0), 0.0))


@dataclass(frozen=True)
class SymmetricPareto(StepDistribution):
    """Symmetric Pareto law with density ``(p/2) |y|^(-p-1)`` on ``|y| >= 1``."""

    p: float = 2.0

    def __post_init__(self):
        if not (self.p > 0 and math.isfinite(self.p)):
            raise ValueError(f"Pareto index must be positive, got {self.p!r}")

    def _abs_cdf(self, r):
        r = _as_float(r)
        with np.errstate(divide="ignore"):
            return np.where(r >= 1.0, 1.0 - np.maximum(r, 1.0) ** (-self.p), 0.0)

    def sf(self, t):
        t = _as_float(t)
        return _unwrap(np.where(t >= 1.0, 0.5 * np.maximum(t, 1.0) ** (-self.p), 0.5))

    def magnitude_ppf(self, q):
        return pareto_magnitude(1.0 - _as_float(q), self.p)

    def alpha_moment(self, alpha):
        alpha = check_alpha(alpha)
        return self.p / (self.p - alpha) if alpha < self.p else math.inf

    def g_complement(self, t, alpha):
        t = np.maximum(_as_float(t), 1.0)
        p = self.p
        if abs(alpha - p) < 1e-9 * p:
            out = t ** (-alpha) * (1.0 + alpha * np.log(t))
        else:
            out = (alpha * t ** (-p) - p * t ** (-alpha)) / (alpha - p)
        return _unwrap(out)

    def g(self, t, alpha):
        return _unwrap(1.0 - _as_float(self.g_complement(t, alpha)))

    def g_prime(self, t, alpha):
        t = _as_float(t)
        s = np.maximum(t, 1.0)
        p = self.p
        if abs(alpha - p) < 1e-9 * p:
            out = alpha**2 * s ** (-alpha - 1.0) * np.log(s)
        else:
            out = alpha * p * (s ** (-p - 1.0) - s ** (-alpha - 1.0)) / (alpha - p)
        return _unwrap(np.where(t > 1.0, out, 0.0))


@dataclass(frozen=True)
class SymmetricUniform(StepDistribution):
    """Uniform law on ``[-1, 1]``."""

    def _abs_cdf(self, r):
        return np.clip(_as_float(r), 0.0, 1.0)

    def magnitude_ppf(self, q):
        return _as_float(q)

    def alpha_moment(self, alpha):
        return 1.0 / (check_alpha(alpha) + 1.0)

    def g(self, t, alpha):
        t = _as_float(t)
        c = 1.0 / (alpha + 1.0)
        with np.errstate(divide="ignore"):
            out = np.where(t >= 1.0, 1.0 - c * np.maximum(t, 1.0) ** (-alpha), alpha * c * t)
        return _unwrap(out)

    def g_complement(self, t, alpha):
        t = _as_float(t)
        c = 1.0 / (alpha + 1.0)
        out = np.where(t >= 1.0, c * np.maximum(t, 1.0) ** (-alpha), 1.0 - alpha * c * t)
        return _unwrap(out)

    def g_prime(self, t, alpha):
        t = _as_float(t)
        c = alpha / (alpha + 1.0)
        return _unwrap(np.where(t >= 1.0, c * np.maximum(t, 1.0) ** (-alpha - 1.0), c))


@dataclass(frozen=True)
class TwoPointParetoMixture(StepDistribution):
    """``p * two-point(1) + (1 - p) * Pareto(p)`` for ``p`` in ``(0, 1]``."""

    p: float = 0.5
    _two_point: SymmetricTwoPoint = field(init=False, repr=False, compare=False)
    _pareto: SymmetricPareto = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0 < self.p <= 1:
            raise ValueError(f"mixture weight must lie in (0, 1], got {self.p!r}")
        object.__setattr__(self, "_two_point", SymmetricTwoPoint(1.0))
        object.__setattr__(self, "_pareto", SymmetricPareto(self.p))

    @property
    def atoms(self):
        return (1.0,)

    def _mix(self, a, b):
        return self.p * _as_float(a) + (1.0 - self.p) * _as_float(b)

    def _abs_cdf(self, r):
        return self._mix(self._two_point._abs_cdf(r), self._pareto._abs_cdf(r))

    def _abs_cdf_left(self, r):
        return self._mix(self._two_point._abs_cdf_left(r), self._pareto._abs_cdf_left(r))

    def sf(self, t):
        return _unwrap(self._mix(self._two_point.sf(t), self._pareto.sf(t)))

    def magnitude_ppf(self, q):
        q = _as_float(q)
        p = self.p
        if p == 1.0:
            return np.ones_like(q)
        with np.errstate(divide="ignore", invalid="ignore"):
            tail = pareto_magnitude(np.clip((1.0 - q) / (1.0 - p), 1e-300, 1.0), p)
        return np.where(q <= p, 1.0, tail)

    def alpha_moment(self, alpha):
        return _unwrap(self._mix(self._two_point.alpha_moment(alpha), self._pareto.alpha_moment(alpha)))

    def g(self, t, alpha):
        return _unwrap(self._mix(self._two_point.g(t, alpha), self._pareto.g(t, alpha)))

    def g_complement(self, t, alpha):
        return _unwrap(self._mix(self._two_point.g_complement(t, alpha), self._pareto.g_complement(t, alpha)))

    def g_prime(self, t, alpha):
        return _unwrap(self._mix(self._two_point.g_prime(t, alpha), self._pareto.g_prime(t, alpha)))


class TabulatedSymmetric(StepDistribution):
    """Symmetric law given by ``F(t)`` on a grid of positive ``t``.

    ``F`` is linearly interpolated from ``F(0) = 1/2`` through the grid; any
    mass missing at the last grid point (``F < 1`` there) sits as an atom at
    that point. The transform has no closed form and is computed by
    quadrature.
    """

    closed_form = False

    def __init__(self, grid, cdf_values):
        grid = np.asarray(grid, dtype=float)
        values = np.asarray(cdf_values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape or grid.size < 1:
            raise ValueError("grid and cdf values must be 1-d arrays of equal length")
        if not np.all(grid > 0) or not np.all(np.diff(grid) > 0):
            raise ValueError("grid must be strictly increasing and positive")
        if np.any(values < 0.5) or np.any(values > 1.0) or np.any(np.diff(values) < 0):
            raise ValueError("cdf values on t > 0 must be non-decreasing within [1/2, 1]")
        self.grid = grid
        self.values = values
        self._knots = np.concatenate([[0.0], grid])
        self._abs_knots = np.concatenate([[0.0], 2.0 * values - 1.0])

    def __repr__(self):
        return f"TabulatedSymmetric(<{self.grid.size} points on [{self.grid[0]:g}, {self.grid[-1]:g}]>)"

    @classmethod
    def from_csv(cls, path):
        with open(path) as fh:
            lines = [ln for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
        try:
            float(lines[0].split(",")[0])
        except (IndexError, ValueError):
            lines = lines[1:]  # header row
        data = np.loadtxt(lines, delimiter=",", ndmin=2)
        if data.shape[1] != 2:
            raise ValueError(f"{path}: expected two columns (t, F(t))")
        return cls(data[:, 0], data[:, 1])

    @property
    def atoms(self):
        return (float(self.grid[-1]),) if self.values[-1] < 1.0 else ()

    def _abs_cdf(self, r):
        r = _as_float(r)
        return np.where(r >= self.grid[-1], 1.0, np.interp(r, self._knots, self._abs_knots))

    def _abs_cdf_left(self, r):
        r = _as_float(r)
        return np.where(r > self.grid[-1], 1.0, np.interp(r, self._knots, self._abs_knots))

    def magnitude_ppf(self, q):
        q = _as_float(q)
        h, y = self._abs_knots, self._knots
        idx = np.searchsorted(h, q, side="left")
        hi = np.clip(idx, 1, h.size - 1)
        lo = hi - 1
        with np.errstate(divide="ignore", invalid="ignore"):
            frac = (q - h[lo]) / (h[hi] - h[lo])
        inner = y[lo] + np.clip(frac, 0.0, 1.0) * (y[hi] - y[lo])
        return np.where(idx == 0, 0.0, np.where(idx >= h.size, y[-1], inner))

    def alpha_moment(self, alpha):
        alpha = check_alpha(alpha)
        a, b = self._knots[:-1], self._knots[1:]
        dens = np.diff(self._abs_knots) / (b - a)
        total = np.sum(dens * (b ** (alpha + 1) - a ** (alpha + 1)) / (alpha + 1))
        return float(total + (1.0 - self._abs_knots[-1]) * self.grid[-1] ** alpha)

    def g(self, t, alpha):
        alpha = check_alpha(alpha)
        t = _as_float(t)
        out = np.array([_g_by_quadrature(self, alpha, float(ti)) for ti in t.ravel()])
        return _unwrap(out.reshape(t.shape))

    def g_prime(self, t, alpha):
        raise NotImplementedError("tabulated laws have no analytic transform derivative")


def _g_by_quadrature(dist: StepDistribution, alpha: float, t: float) -> float:
    """``G(t) = 2 alpha t^-alpha * int_0^t x^(alpha-1) (F(x) - 1/2) dx``.

    The integration-by-parts form of the transform; needs only the CDF.
    """
    if t <= 0:
        raise ValueError("G is defined for t > 0")
    points = [a for a in (*dist.atoms, *getattr(dist, "grid", ())) if 0 < a < t]
    # the interval count in quad is bounded, so hand it at most a few hundred breaks
    if len(points) > 400:
        points = list(np.asarray(points)[np.linspace(0, len(points) - 1, 400).astype(int)])

    def integrand(x):
        return x ** (alpha - 1.0) * (float(dist.cdf(x)) - 0.5)

    val, err, *rest = integrate.quad(
        integrand, 0.0, t, points=points or None, epsabs=1e-12, epsrel=1e-12, limit=1000, full_output=1
    )
    if err > 1e-10 * max(1.0, t**alpha):
        raise QuadratureError(f"transform quadrature at t={t:g} did not converge (error estimate {err:.2e})")
    return 2.0 * alpha * t ** (-alpha) * val
