"""Simulation of the Kendall random walk.

Two samplers are provided:

``kernel``
    the Markov chain whose one-step law from ``x`` is the convolution of the
    point mass at ``x`` with the step law. Every output carries a fresh fair
    sign.
``recursion``
    the explicit max/min recursion: the magnitude follows the same dynamics,
    but in the two-point branch the sign is inherited from whichever of
    ``X_n``, ``Y_{n+1}`` has the larger modulus.

Both produce the same one-dimensional marginals; path functionals such as
first-passage times are only those of the Markov chain in ``kernel`` mode.

Batches are split into fixed-size blocks of paths, and block ``b`` draws from
``RngStream(master_seed, b)``. Results therefore do not depend on how many
workers run the blocks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .measures import (
    RngStream,
    StepDistribution,
    _as_float,
    _unwrap,
    check_alpha,
    pareto_magnitude,
    random_signs,
)

__all__ = [
    "WalkConfig",
    "WalkBatch",
    "ResourceExhaustedError",
    "step_kernel",
    "step_recursion",
    "simulate_batch",
    "first_passage",
    "first_passage_batch",
    "MAX_STORED_VALUES",
    "MAX_SIMULATED_VALUES",
]

MAX_STORED_VALUES = 10**7
MAX_SIMULATED_VALUES = 10**10


class ResourceExhaustedError(RuntimeError):
    pass


def _pareto_draws(rng, alpha, size):
    return pareto_magnitude(1.0 - rng.random(size), 2.0 * alpha)


def step_kernel(x, dist: StepDistribution, alpha, rng: np.random.Generator):
    """One transition of the Markov chain from ``x`` (scalar or array)."""
    x = _as_float(x)
    size = x.shape
    y = _as_float(dist.sample(rng, size))
    ax, ay = np.abs(x), np.abs(y)
    big, small = np.maximum(ax, ay), np.minimum(ax, ay)
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.where(big > 0, (small / np.where(big > 0, big, 1.0)) ** alpha, 0.0)
    v = rng.random(size)
    theta = _pareto_draws(rng, alpha, size)
    signs = random_signs(rng, size)
    return _unwrap(signs * big * np.where(v < w, theta, 1.0))


def step_recursion(x, dist: StepDistribution, alpha, rng: np.random.Generator, literal: bool = False):
    """One step of the explicit max/min recursion.

    The Pareto factor is used with probability ``(m/M)^alpha``. ``literal=True``
    flips that to probability ``1 - (m/M)^alpha``, the opposite orientation of
    the indicator; it exists for experiments only and does not reproduce the
    convolution law.
    """
    x = _as_float(x)
    size = x.shape
    y = _as_float(dist.sample(rng, size))
    ax, ay = np.abs(x), np.abs(y)
    big, small = np.maximum(ax, ay), np.minimum(ax, ay)
    # ties (|x| == |y|) take the sign of the new step
    r = np.where(ax > ay, np.sign(x), np.sign(y))
    with np.errstate(divide="ignore", invalid="ignore"):
        rho = np.where(big > 0, (small / np.where(big > 0, big, 1.0)) ** alpha, 0.0)
    xi = rng.random(size)
    theta = _pareto_draws(rng, alpha, size) * random_signs(rng, size)
    use_pareto = xi > rho if literal else xi < rho
    return _unwrap(big * r * np.where(use_pareto, theta, 1.0))


@dataclass(frozen=True)
class WalkConfig:
    dist: StepDistribution
    alpha: float
    n_steps: int
    n_paths: int
    mode: str = "kernel"
    master_seed: int = 0
    x0: float = 0.0
    #: level and direction of the recorded first passage
    level: float = 0.0
    direction: str = "up"
    block_size: int = 65536
    literal_recursion: bool = False

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_alpha(self.alpha))
        if int(self.n_steps) != self.n_steps or self.n_steps < 1:
            raise ValueError(f"n_steps must be a positive integer, got {self.n_steps!r}")
        if int(self.n_paths) != self.n_paths or self.n_paths < 1:
            raise ValueError(f"n_paths must be a positive integer, got {self.n_paths!r}")
        if self.mode not in ("kernel", "recursion"):
            raise ValueError(f"mode must be 'kernel' or 'recursion', got {self.mode!r}")
        if self.direction not in ("up", "down"):
            raise ValueError(f"direction must be 'up' or 'down', got {self.direction!r}")
        if self.block_size < 1:
            raise ValueError("block_size must be positive")
        RngStream(self.master_seed)  # validates the seed range


@dataclass
class WalkBatch:
    """Simulated paths and their first-passage records.

    ``tau`` holds first-passage indices (1-based) with ``-1`` for paths that
    never cross within ``n_steps``; ``overshoot`` is ``nan`` for those.
    ``trajectories`` is ``None`` when the batch exceeds the storage budget or
    storage was not requested.
    """

    config: WalkConfig
    tau: np.ndarray
    overshoot: np.ndarray
    marginals: dict = field(default_factory=dict)
    trajectories: Optional[np.ndarray] = None

    @property
    def attained(self) -> np.ndarray:
        return self.tau > 0


def _simulate_block(config: WalkConfig, block: int, n: int, checkpoints: tuple, store: bool):
    rng = RngStream(config.master_seed, block).generator()
    step = step_kernel if config.mode == "kernel" else step_recursion
    kwargs = {"literal": config.literal_recursion} if config.mode == "recursion" else {}
    x = np.full(n, float(config.x0))
    tau = np.full(n, -1, dtype=np.int64)
    over = np.full(n, np.nan)
    marg = {}
    traj = np.empty((n, config.n_steps)) if store else None
    last_needed = max(checkpoints, default=0)
    up = config.direction == "up"
    for k in range(1, config.n_steps + 1):
        x = step(x, config.dist, config.alpha, rng, **kwargs)
        hit = (tau < 0) & ((x > config.level) if up else (x < config.level))
        tau[hit] = k
        over[hit] = x[hit]
        if k in checkpoints:
            marg[k] = x.copy()
        if store:
            traj[:, k - 1] = x
        elif k >= last_needed and np.all(tau > 0):
            # nothing left to record in this block
            break
    return tau, over, marg, traj


def simulate_batch(config: WalkConfig, checkpoints=(), store: Optional[bool] = None, workers: int = 1) -> WalkBatch:
    """Simulate ``config.n_paths`` independent walks.

    ``checkpoints`` lists steps whose marginal samples are kept. Full
    trajectories are stored when ``store`` is true, or by default when they fit
    in :data:`MAX_STORED_VALUES`. The result is a pure function of ``config``.
    """
    total = config.n_paths * config.n_steps
    if total > MAX_SIMULATED_VALUES:
        raise ResourceExhaustedError(
            f"{config.n_paths} paths x {config.n_steps} steps exceeds the budget of {MAX_SIMULATED_VALUES} values"
        )
    if store is None:
        store = total <= MAX_STORED_VALUES
    elif store and total > MAX_STORED_VALUES:
        raise ResourceExhaustedError(f"storing {total} values exceeds the budget of {MAX_STORED_VALUES}")
    checkpoints = tuple(sorted(set(int(c) for c in checkpoints)))
    if any(c < 1 or c > config.n_steps for c in checkpoints):
        raise ValueError(f"checkpoints must lie in 1..{config.n_steps}")

    n_blocks = math.ceil(config.n_paths / config.block_size)
    sizes = [min(config.block_size, config.n_paths - b * config.block_size) for b in range(n_blocks)]

    def run(b):
        return _simulate_block(config, b, sizes[b], checkpoints, store)

    if workers > 1 and n_blocks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, range(n_blocks)))
    else:
        parts = [run(b) for b in range(n_blocks)]

    tau = np.concatenate([p[0] for p in parts])
    over = np.concatenate([p[1] for p in parts])
    marginals = {c: np.concatenate([p[2][c] for p in parts]) for c in checkpoints}
    traj = np.concatenate([p[3] for p in parts]) if store else None
    return WalkBatch(config, tau, over, marginals, traj)


def first_passage(trajectory, level: float = 0.0, direction: str = "up"):
    """``(tau, X_tau)`` for the first index ``n >= 1`` with ``X_n > level`` (``< level`` for down).

    ``trajectory[0]`` is ``X_1``. Returns ``(None, None)`` when the level is
    never crossed.
    """
    if direction not in ("up", "down"):
        raise ValueError("direction must be 'up' or 'down'")
    x = np.asarray(trajectory, dtype=float)
    hits = np.flatnonzero(x > level if direction == "up" else x < level)
    if hits.size == 0:
        return None, None
    i = int(hits[0])
    return i + 1, float(x[i])


def first_passage_batch(trajectories, level: float = 0.0, direction: str = "up"):
    """Vectorised :func:`first_passage` over the rows of a 2-d array; ``-1``/``nan`` when not attained."""
    x = np.asarray(trajectories, dtype=float)
    crossed = x > level if direction == "up" else x < level
    any_hit = crossed.any(axis=1)
    idx = crossed.argmax(axis=1)
    tau = np.where(any_hit, idx + 1, -1)
    over = np.where(any_hit, x[np.arange(x.shape[0]), idx], np.nan)
    return tau, over
