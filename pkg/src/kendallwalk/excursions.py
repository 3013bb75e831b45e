"""First passage above zero: hitting time, overshoot and their joint transform.

All formulas are in terms of the step CDF ``F`` and the radial transform ``G``
of the step law. Events are taken on the open interval ``(0, t)``, so ``F`` is
used through its left limit ``F(t-)``; for continuous steps this makes no
difference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .measures import StepDistribution, _as_float, _unwrap, check_alpha
from .walk import step_kernel
from .williamson import psi

__all__ = [
    "ExcursionLaw",
    "GeometricKendall",
    "phi_n",
    "phi_partial_sum",
    "tau_pmf",
    "tau_pgf",
    "tau_pgf_derivative",
    "overshoot_cdf",
    "overshoot_sf",
    "geometric_kendall_transform",
    "sample_geometric_kendall",
    "wiener_hopf_H",
    "wiener_hopf_estimate",
    "overshoot_alpha_moment",
    "overshoot_alpha_moment_quadrature",
]


@dataclass(frozen=True)
class ExcursionLaw:
    """A step law with no atom at zero, together with the exponent alpha."""

    dist: StepDistribution
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_alpha(self.alpha))
        if self.dist.zero_atom != 0:
            raise ValueError("excursion formulas need a step law without an atom at 0 (F(0) = 1/2)")

    def F(self, t, strict=True):
        return _as_float(self.dist.cdf_left(t) if strict else self.dist.cdf(t))

    def G(self, t):
        return _as_float(self.dist.g(t, self.alpha))


def _positive(t):
    t = _as_float(t)
    if np.any(t <= 0):
        raise ValueError("t must be positive")
    return t


def phi_n(law: ExcursionLaw, n: int, t, strict: bool = True):
    """``P(X_1 <= 0, ..., X_{n-1} <= 0, 0 < X_n < t)``.

    Equal to ``2^-n G^(n-1) [2n (F - 1/2) - (n-1) G]``; evaluated in logs
    once ``n > 40``.
    """
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    n = int(n)
    t = _positive(t)
    f = law.F(t, strict) - 0.5
    g = law.G(t)
    bracket = 2 * n * f - (n - 1) * g
    if n == 1:
        return _unwrap(f)
    if n <= 40:
        return _unwrap(2.0**-n * g ** (n - 1) * bracket)
    ok = (g > 0) & (bracket > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        logv = -n * math.log(2.0) + (n - 1) * np.log(g) + np.log(bracket)
    return _unwrap(np.where(ok, np.exp(logv), 0.0))


def phi_partial_sum(law: ExcursionLaw, t, terms: int = 60, strict: bool = True):
    """``sum_{k <= terms} phi_k(t)``; the remainder is at most ``2^-terms``."""
    t = _positive(t)
    parts = np.array([_as_float(phi_n(law, k, t, strict)) for k in range(terms, 0, -1)])
    # smallest terms first
    return _unwrap(parts.sum(axis=0))


def tau_pmf(k):
    """``P(tau = k) = 2^-k``."""
    k = np.asarray(k)
    if np.any(k < 1):
        raise ValueError("k must be >= 1")
    return _unwrap(np.power(2.0, -k.astype(float)))


def _check_s(s, upper=2.0, closed=False):
    s = _as_float(s)
    bad = (s < 0) | ((s > upper) if closed else (s >= upper))
    if np.any(bad):
        interval = f"[0, {upper:g}]" if closed else f"[0, {upper:g})"
        raise ValueError(f"s must lie in {interval}")
    return s


def tau_pgf(s):
    """``E s^tau = (s/2) / (1 - s/2)`` for ``0 <= s < 2``."""
    s = _check_s(s)
    return _unwrap((s / 2) / (1 - s / 2))


def tau_pgf_derivative(s):
    s = _check_s(s)
    return _unwrap(0.5 / (1 - s / 2) ** 2)


def overshoot_cdf(law: ExcursionLaw, t, strict: bool = True):
    """Law of the first positive value ``X_tau``.

    ``(4F - 2 - G^2) / (2 - G)^2``. With ``strict=True`` this is
    ``P(X_tau < t)``; with ``strict=False`` the right-continuous
    ``P(X_tau <= t)``.
    """
    t = _positive(t)
    f = law.F(t, strict)
    g = law.G(t)
    return _unwrap((4 * f - 2 - g * g) / (2 - g) ** 2)


def overshoot_sf(law: ExcursionLaw, t):
    """``P(X_tau > t)`` computed without cancellation for large ``t``."""
    t = _positive(t)
    tail = 2.0 * _as_float(law.dist.sf(t))
    gc = _as_float(law.dist.g_complement(t, law.alpha))
    return _unwrap((2.0 * tail + 2.0 * gc * gc) / (1.0 + gc) ** 2)


@dataclass(frozen=True)
class GeometricKendall:
    """The walk read off at an independent time ``N`` with ``P(N = k) = (s/2)^(k-1) (1 - s/2)``."""

    s: float
    base: ExcursionLaw

    def __post_init__(self):
        _check_s(self.s, upper=1.0, closed=True)


def geometric_kendall_transform(z: GeometricKendall, t):
    """``E Psi(Z/t) = G(t) (1 - s/2) / (1 - (s/2) G(t))``."""
    t = _positive(t)
    g = z.base.G(t)
    h = z.s / 2
    return _unwrap(g * (1 - h) / (1 - h * g))


def sample_geometric_kendall(z: GeometricKendall, size: int, rng: np.random.Generator) -> np.ndarray:
    """Monte Carlo draws of ``Z``: geometric ``N`` first, then a kernel-mode walk up to ``N``."""
    n = rng.geometric(1 - z.s / 2, size=size)
    x = np.zeros(size)
    out = np.empty(size)
    for k in range(1, int(n.max()) + 1):
        x = step_kernel(x, z.base.dist, z.base.alpha, rng)
        done = n == k
        out[done] = x[done]
    return out


def wiener_hopf_H(law: ExcursionLaw, s, u):
    """``E[s^tau Psi(u X_tau)] = (s/2) G(1/u) / (1 - (s/2) G(1/u))``.

    ``u = 0`` gives the limit ``E s^tau``.
    """
    s = _check_s(s, upper=1.0, closed=True)
    s, u = np.broadcast_arrays(s, np.abs(_as_float(u)))
    g = np.ones(u.shape)
    nz = u > 0
    if np.any(nz):
        g[nz] = law.G(1.0 / u[nz])
    h = s / 2
    return _unwrap(h * g / (1 - h * g))


def wiener_hopf_estimate(tau, overshoot, s, u, alpha):
    """Sample mean and standard error of ``s^tau Psi(u X_tau)``.

    Paths that never went positive contribute 0 (``s^tau -> 0`` and
    ``Psi(u X_tau) -> 0``).
    """
    tau = np.asarray(tau)
    hit = tau > 0
    vals = np.zeros(tau.shape)
    vals[hit] = float(s) ** tau[hit] * _as_float(psi(alpha, u * np.asarray(overshoot)[hit]))
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(vals.size))


def overshoot_alpha_moment(law: ExcursionLaw) -> float:
    """``E X_tau^alpha = 2 E|Y|^alpha`` (infinite when the step moment is)."""
    return 2.0 * law.dist.alpha_moment(law.alpha)


def overshoot_alpha_moment_quadrature(law: ExcursionLaw, split: float = 1e-6) -> float:
    """``E X_tau^alpha`` by integrating the overshoot survival function.

    ``E X^alpha = int_0^inf P(X^alpha > w) dw``. The integral is cut at
    ``W`` where the survival drops below ``split``; the tail beyond ``W`` is
    mapped onto ``(0, 1/W]`` by ``v = 1/w``, where its integrand stays bounded.
    """
    if not math.isfinite(law.dist.alpha_moment(law.alpha)):
        return math.inf
    alpha = law.alpha
    T = 1.0
    while float(overshoot_sf(law, T)) >= split:
        T *= 2.0
    W = T**alpha
    atoms = [a**alpha for a in law.dist.atoms if 0 < a**alpha < W]

    def body(w):
        return float(overshoot_sf(law, w ** (1.0 / alpha))) if w > 0 else 1.0

    def tail(v):
        return float(overshoot_sf(law, v ** (-1.0 / alpha))) / (v * v)

    opts = dict(epsabs=0.0, epsrel=1e-11, limit=500)
    head, _ = integrate.quad(body, 0.0, W, points=atoms or None, **opts)
    rest, _ = integrate.quad(tail, 0.0, 1.0 / W, **opts)
    return head + rest
