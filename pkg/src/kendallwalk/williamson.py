"""Williamson transform and its inverse.

For a symmetric law ``nu`` the transform is ``nu_hat(t) = E(1 - |tY|^alpha)_+``
and ``G(t) = nu_hat(1/t)``. The CDF is recovered pointwise from ``G`` and its
derivative::

    F(t) = ((G(t) + 1) / 2) + t G'(t) / (2 alpha),   t > 0,

at every continuity point of ``F``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .measures import (
    QuadratureError,
    StepDistribution,
    _as_float,
    _g_by_quadrature,
    _unwrap,
    check_alpha,
)

__all__ = [
    "JumpError",
    "QuadratureError",
    "TransformFn",
    "psi",
    "forward",
    "forward_quadrature",
    "g_of",
    "transform_of",
    "inverse",
    "fd_step",
]

#: CDF jump implied by mismatched one-sided quotients above which inversion refuses
JUMP_TOLERANCE = 1e-3


class JumpError(ValueError):
    """The target CDF jumps at the requested point, so inversion is undefined there."""


def psi(alpha, t):
    """The transform kernel ``(1 - |t|^alpha)_+``."""
    t = _as_float(t)
    return _unwrap(np.clip(1.0 - np.abs(t) ** alpha, 0.0, None))


def forward(dist: StepDistribution, alpha, t):
    """``nu_hat(t)``, from the family's closed form when it has one."""
    alpha = check_alpha(alpha)
    t = np.abs(_as_float(t))
    out = np.ones_like(t)
    nz = t > 0
    if np.any(nz):
        out[nz] = _as_float(dist.g(1.0 / t[nz], alpha))
    return _unwrap(out)


def forward_quadrature(dist: StepDistribution, alpha, t):
    """``nu_hat(t)`` from the CDF alone, via integration by parts.

    Raises :class:`QuadratureError` when the adaptive rule cannot meet its
    tolerance.
    """
    alpha = check_alpha(alpha)
    t = np.abs(_as_float(t))
    out = np.array([1.0 if ti == 0 else _g_by_quadrature(dist, alpha, 1.0 / ti) for ti in t.ravel()])
    return _unwrap(out.reshape(t.shape))


def g_of(dist: StepDistribution, alpha, t):
    """``G(t) = nu_hat(1/t)`` for ``t > 0``."""
    alpha = check_alpha(alpha)
    t = _as_float(t)
    if np.any(t <= 0):
        raise ValueError("G is defined for t > 0")
    return dist.g(t, alpha)


@dataclass(frozen=True)
class TransformFn:
    """A radial transform ``G`` (and optionally its exact derivative) at fixed alpha."""

    alpha: float
    g: Callable
    g_prime: Optional[Callable] = None

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_alpha(self.alpha))

    def nu_hat(self, t):
        t = np.abs(_as_float(t))
        out = np.ones_like(t)
        nz = t > 0
        out[nz] = _as_float(self.g(1.0 / t[nz]))
        return _unwrap(out)


def transform_of(dist: StepDistribution, alpha, analytic: bool = True) -> TransformFn:
    """Wrap a distribution's ``G``; ``analytic=False`` drops the exact derivative."""
    alpha = check_alpha(alpha)
    deriv = (lambda t: dist.g_prime(t, alpha)) if (analytic and dist.closed_form) else None
    return TransformFn(alpha, lambda t: dist.g(t, alpha), deriv)


def fd_step(t):
    # kept inside (0, 2t) so the left point stays positive
    t = np.abs(_as_float(t))
    return np.minimum(1e-5 * np.maximum(t, 1.0), 0.5 * t)


def _fd_derivative(g: Callable, t: np.ndarray, alpha: float) -> np.ndarray:
    h = fd_step(t)
    g0 = _as_float(g(t))
    gp = _as_float(g(t + h))
    gm = _as_float(g(t - h))
    right = (gp - g0) / h
    left = (g0 - gm) / h
    # a jump J in F shows up as a jump 2 alpha J / t in G'
    jump = np.abs(right - left) * t / (2.0 * alpha) > JUMP_TOLERANCE
    if np.any(jump):
        where = t[jump]
        raise JumpError(
            f"one-sided difference quotients disagree at t={where[0]:.17g}"
            + (f" (and {where.size - 1} more points)" if where.size > 1 else "")
        )
    return (gp - gm) / (2.0 * h)


def inverse(transform: TransformFn, t):
    """Recover ``F(t)`` for ``t > 0`` from ``G``.

    Uses the exact ``G'`` when the transform carries one; otherwise a central
    difference with step ``1e-5 * max(t, 1)``. In the latter case a point where
    the left and right quotients disagree raises :class:`JumpError` rather than
    returning an average.
    """
    t = _as_float(t)
    if np.any(t <= 0):
        raise ValueError("inverse is evaluated at t > 0; use symmetry for t < 0")
    alpha = transform.alpha
    g = _as_float(transform.g(t))
    if transform.g_prime is not None:
        dg = _as_float(transform.g_prime(t))
    else:
        dg = _fd_derivative(transform.g, t, alpha)
    return _unwrap(0.5 * (g + 1.0) + t * dg / (2.0 * alpha))
