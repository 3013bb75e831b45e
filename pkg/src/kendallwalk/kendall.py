"""Kendall convolution of symmetric laws.

Convolving the point masses at ``x`` and ``y`` gives, with ``M = max(|x|, |y|)``
and ``w = (min(|x|, |y|) / M)^alpha``, the law of ``M * Z`` where ``Z`` is
``Pareto(2 alpha)``-symmetric with probability ``w`` and ``+-1`` otherwise.
Everything else here (transition kernel, n-fold powers, the stable limit) is
built on that mixture or on its radial transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measures import (
    StepDistribution,
    SymmetricPareto,
    _as_float,
    _unwrap,
    check_alpha,
    pareto_magnitude,
    random_signs,
)
from .williamson import _fd_derivative, psi

__all__ = [
    "PointConvolutionLaw",
    "ConvolutionPowerLaw",
    "convolve_point",
    "kernel_cdf_h",
    "transition_cdf",
    "power_cdf",
    "example_cdf",
    "EXAMPLE_FAMILIES",
    "stable_limit_cdf",
    "stable_limit_g",
    "stable_limit_g_prime",
    "rescaled_power_transform",
]


@dataclass(frozen=True)
class PointConvolutionLaw:
    """``T_M(w * Pareto(2 alpha) + (1 - w) * two-point(1))``; ``M = 0`` is the point mass at 0."""

    scale: float
    pareto_weight: float
    alpha: float

    def __post_init__(self):
        check_alpha(self.alpha)
        if self.scale < 0:
            raise ValueError("scale must be non-negative")
        if not 0.0 <= self.pareto_weight <= 1.0:
            raise ValueError("pareto_weight must lie in [0, 1]")

    @property
    def degenerate(self) -> bool:
        return self.scale == 0

    def cdf(self, t):
        t = _as_float(t)
        if self.degenerate:
            return _unwrap(np.where(t >= 0, 1.0, 0.0))
        r = t / self.scale
        two_point = np.where(r >= 1, 1.0, np.where(r >= -1, 0.5, 0.0))
        pareto = _as_float(SymmetricPareto(2 * self.alpha).cdf(r))
        w = self.pareto_weight
        return _unwrap((1 - w) * two_point + w * pareto)

    def open_interval_mass(self, t):
        """Mass of ``(0, t)`` for ``t > 0``."""
        t = _as_float(t)
        if self.degenerate:
            return _unwrap(np.zeros_like(t))
        M, w = self.scale, self.pareto_weight
        with np.errstate(divide="ignore"):
            out = 0.5 * (1.0 - w * (M / t) ** (2 * self.alpha))
        return _unwrap(np.where(M < t, out, 0.0))

    def nu_hat(self, t):
        """Williamson transform of the law, from its two mixture components."""
        k = _as_float(psi(self.alpha, self.scale * _as_float(t)))
        w = self.pareto_weight
        return _unwrap((1 - w) * k + w * k * k)

    def sample(self, rng: np.random.Generator, size=None):
        u = rng.random(size)
        mag = pareto_magnitude(1.0 - rng.random(size), 2 * self.alpha)
        signs = random_signs(rng, size)
        return _unwrap(self.scale * signs * np.where(u < self.pareto_weight, mag, 1.0))


def convolve_point(x: float, y: float, alpha) -> PointConvolutionLaw:
    alpha = check_alpha(alpha)
    big, small = max(abs(x), abs(y)), min(abs(x), abs(y))
    if big == 0:
        return PointConvolutionLaw(0.0, 0.0, alpha)
    return PointConvolutionLaw(big, (small / big) ** alpha, alpha)


def kernel_cdf_h(x, y, t, alpha):
    """Mass that the convolution of the point masses at x and y puts on ``(0, t)``."""
    alpha = check_alpha(alpha)
    x, y, t = np.broadcast_arrays(_as_float(x), _as_float(y), _as_float(t))
    if np.any(t <= 0):
        raise ValueError("t must be positive")
    inside = (np.abs(x) < t) & (np.abs(y) < t) & ((x != 0) | (y != 0))
    out = 0.5 * (1.0 - np.abs(x * y / t**2) ** alpha)
    return _unwrap(np.where(inside, out, 0.0))


def transition_cdf(x, dist: StepDistribution, t, alpha):
    """One-step kernel mass of ``(0, t)`` started from ``x``."""
    alpha = check_alpha(alpha)
    x, t = np.broadcast_arrays(_as_float(x), _as_float(t))
    if np.any(t <= 0):
        raise ValueError("t must be positive")
    k = _as_float(psi(alpha, x / t))
    f = _as_float(dist.cdf_left(t)) - 0.5
    g = _as_float(dist.g(t, alpha))
    out = k * f + 0.5 * g - 0.5 * k * g
    return _unwrap(np.where(np.abs(x) < t, out, 0.0))


@dataclass(frozen=True)
class ConvolutionPowerLaw:
    """The n-fold Kendall convolution power of ``base``."""

    base: StepDistribution
    n: int
    alpha: float

    def __post_init__(self):
        check_alpha(self.alpha)
        if int(self.n) != self.n or self.n < 1:
            raise ValueError("n must be a positive integer")

    def g(self, t):
        return _unwrap(_as_float(self.base.g(t, self.alpha)) ** self.n)

    def cdf(self, t):
        return power_cdf(self, t)

    def cdf_left(self, t):
        if self.n == 1:
            return self.base.cdf_left(t)
        return power_cdf(self, t)


def power_cdf(law: ConvolutionPowerLaw, t):
    """``F_n(t)`` from ``G`` and ``G'`` of the base law.

    ``F_n(t) = (G^n + 1)/2 + n t G^(n-1) G' / (2 alpha)`` for ``t > 0``,
    mirrored for ``t < 0``. Bases without a closed-form derivative use the
    finite-difference policy of :func:`kendallwalk.williamson.inverse`.
    """
    t = _as_float(t)
    if law.n == 1:
        return law.base.cdf(t)
    a = np.abs(t)
    pos = a > 0
    val = np.full(a.shape, 0.5)
    if np.any(pos):
        r = a[pos]
        alpha, n, base = law.alpha, law.n, law.base
        g = _as_float(base.g(r, alpha))
        if base.closed_form:
            dg = _as_float(base.g_prime(r, alpha))
        else:
            dg = _fd_derivative(lambda s: base.g(s, alpha), r, alpha)
        val[pos] = 0.5 * (g**n + 1.0) + n * r * g ** (n - 1) * dg / (2.0 * alpha)
    return _unwrap(np.where(t >= 0, val, 1.0 - val))


# Closed forms for four concrete bases.
EXAMPLE_FAMILIES = ("uniform", "two-point", "mixture", "pareto")


def _mirror(t, half):
    t = _as_float(t)
    a = np.abs(t)
    val = half(a)
    return _unwrap(np.where(t >= 0, val, 1.0 - val))


def _two_point_power(n, alpha, a):
    with np.errstate(divide="ignore"):
        u = 1.0 - np.maximum(a, 1.0) ** (-alpha)
    val = 0.5 + 0.5 * n * u ** (n - 1) - 0.5 * (n - 1) * u**n
    return np.where(a >= 1.0, val, 0.5)


def _uniform_power(n, alpha, a):
    c = 1.0 / (alpha + 1.0)
    inner = 0.5 + 0.5 * (alpha * c) ** n * (1.0 + n / alpha) * a**n
    with np.errstate(divide="ignore"):
        v = c * np.maximum(a, 1.0) ** (-alpha)
    outer = 0.5 + 0.5 * (1.0 - v) ** (n - 1) * (1.0 + (n - 1) * v)
    return np.where(a < 1.0, inner, outer)


def _mixture_power(n, alpha, p, a):
    s = np.maximum(a, 1.0)
    base = 1.0 - alpha * (1 - p) / (alpha - p) * s**-p + p * (1 - alpha) / (alpha - p) * s**-alpha
    tilt = 1.0 + (1 - p) * (n * p - alpha) / (alpha - p) * s**-p - p * (1 - alpha) * (n - 1) / (alpha - p) * s**-alpha
    return np.where(a >= 1.0, 0.5 + 0.5 * base ** (n - 1) * tilt, 0.5)


def example_cdf(family: str, n: int, alpha, t, p: float | None = None):
    """Closed-form ``F_n`` for the four worked bases.

    ``family`` is one of ``"uniform"`` (uniform on [-1, 1]), ``"two-point"``
    (``+-1``), ``"mixture"`` (``p * two-point + (1-p) * Pareto(p)``, needs
    ``0 < p <= 1`` and ``p != alpha``) or ``"pareto"`` (``Pareto(2 alpha)``,
    needs ``alpha <= 1``).
    """
    alpha = check_alpha(alpha)
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    n = int(n)
    if family == "two-point":
        return _mirror(t, lambda a: _two_point_power(n, alpha, a))
    if family == "pareto":
        if alpha > 1:
            raise ValueError("the Pareto(2 alpha) closed form needs alpha in (0, 1]")
        return _mirror(t, lambda a: _two_point_power(2 * n, alpha, a))
    if family == "uniform":
        return _mirror(t, lambda a: _uniform_power(n, alpha, a))
    if family == "mixture":
        if p is None or not 0 < p <= 1:
            raise ValueError("mixture needs p in (0, 1]")
        if math.isclose(p, alpha):
            raise ValueError("mixture closed form needs p != alpha")
        return _mirror(t, lambda a: _mixture_power(n, alpha, p, a))
    raise ValueError(f"unknown family {family!r}; expected one of {EXAMPLE_FAMILIES}")


def stable_limit_g(t, alpha):
    """Radial transform ``exp(-t^-alpha)`` of the limit law."""
    t = _as_float(t)
    with np.errstate(divide="ignore"):
        return _unwrap(np.exp(-(t ** (-alpha))))


def stable_limit_g_prime(t, alpha):
    t = _as_float(t)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        x = t ** (-alpha)
        out = alpha * x / t * np.exp(-x)
    return _unwrap(np.where(np.isfinite(x), out, 0.0))


def stable_limit_cdf(t, alpha):
    """CDF of the weak limit of rescaled powers of the two-point law.

    ``F(t) = (1 + x + e^x) e^-x / 2`` with ``x = t^-alpha``, for ``t > 0``.
    """
    alpha = check_alpha(alpha)
    t = _as_float(t)
    a = np.abs(t)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        x = a ** (-alpha)
        half = 0.5 + 0.5 * (1.0 + x) * np.exp(-x)
    half = np.where(np.isfinite(x), half, 0.5)
    return _unwrap(np.where(t >= 0, half, 1.0 - half))


def rescaled_power_transform(n: int, alpha, t):
    """``(1 - |t|^alpha / n)_+^n``: transform of the n-th power rescaled by ``n^(-1/alpha)``."""
    alpha = check_alpha(alpha)
    c = n ** (-1.0 / alpha)
    return _unwrap(_as_float(psi(alpha, c * _as_float(t))) ** n)
