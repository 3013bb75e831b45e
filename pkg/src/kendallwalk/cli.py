"""Command-line interface: ``kendall <subcommand> ...``.

Every subcommand writes CSV with a single header row and 17 significant
digits, so output of one command can be fed losslessly to another (``transform``
into ``invert``). Exit status is 0 on success, 1 when ``verify`` reports a
failing check and 2 on any usage or domain error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from . import excursions as ex
from . import kendall as kd
from . import verify as vf
from . import walk as wk
from . import williamson as wl
from .measures import (
    StepDistribution,
    SymmetricPareto,
    SymmetricTwoPoint,
    SymmetricUniform,
    TabulatedSymmetric,
    TwoPointParetoMixture,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad command-line input; carries the offending token."""

    def __init__(self, message: str, token: str | None = None):
        super().__init__(message)
        self.token = token

    def __str__(self):
        msg = super().__str__()
        return f"{msg} (at {self.token!r})" if self.token is not None else msg


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --------------------------------------------------------------------------
# argument grammar


def _params(body: str, token: str) -> dict:
    out = {}
    for part in filter(None, body.split(",")):
        key, sep, val = part.partition("=")
        if not sep:
            raise UsageError(f"expected key=value in distribution spec, got {part!r}", token)
        try:
            out[key.strip()] = float(val)
        except ValueError:
            raise UsageError(f"parameter {key.strip()!r} is not a number", token) from None
    return out


def parse_dist(spec: str) -> StepDistribution:
    """``two-point:x=1.0``, ``pareto:p=2.0``, ``uniform``, ``mixture:p=0.5`` or ``table:<path>``."""
    name, _, body = spec.partition(":")
    if name == "table":
        if not body:
            raise UsageError("table needs a path", spec)
        try:
            return TabulatedSymmetric.from_csv(body)
        except (OSError, ValueError) as err:
            raise UsageError(f"cannot read table: {err}", spec) from None
    makers = {
        "two-point": (SymmetricTwoPoint, {"x": 1.0}),
        "pareto": (SymmetricPareto, {"p": None}),
        "uniform": (SymmetricUniform, {}),
        "mixture": (TwoPointParetoMixture, {"p": None}),
    }
    if name not in makers:
        raise UsageError(f"unknown distribution {name!r}; expected one of {', '.join([*makers, 'table'])}", spec)
    cls, defaults = makers[name]
    given = _params(body, spec)
    extra = set(given) - set(defaults)
    if extra:
        raise UsageError(f"unexpected parameter {sorted(extra)[0]!r} for {name}", spec)
    kwargs = {**defaults, **given}
    missing = [k for k, v in kwargs.items() if v is None]
    if missing:
        raise UsageError(f"{name} needs parameter {missing[0]!r}", spec)
    try:
        return cls(**kwargs)
    except ValueError as err:
        raise UsageError(str(err), spec) from None


def parse_grid(spec: str) -> np.ndarray:
    """``start:stop:count`` with ``count >= 2`` and ``start < stop``."""
    parts = spec.split(":")
    if len(parts) != 3:
        raise UsageError("grid must look like start:stop:count", spec)
    try:
        a, b = float(parts[0]), float(parts[1])
        n = int(parts[2])
    except ValueError:
        raise UsageError("grid bounds must be numbers and count an integer", spec) from None
    if n < 2:
        raise UsageError("grid count must be at least 2", spec)
    if not a < b:
        raise UsageError("grid start must be below stop", spec)
    return np.linspace(a, b, n)


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise UsageError("expected a number", text) from None
    if not v > 0:
        raise UsageError("value must be positive", text)
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise UsageError("expected an integer", text) from None
    if v < 1:
        raise UsageError("value must be a positive integer", text)
    return v


def _int_list(text: str) -> list[int]:
    return [_positive_int(t) for t in text.split(",") if t]


def _default_seed() -> int:
    raw = os.environ.get("KENDALL_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError("KENDALL_SEED must be an integer", raw) from None


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def write_csv(stream, header: Sequence[str], columns: Sequence) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(header)
    for row in zip(*columns):
        w.writerow([_fmt(v) for v in row])


def read_csv(path: str) -> tuple[list[str], np.ndarray]:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as err:
        raise UsageError(f"cannot read {err.filename}: {err.strerror}", path) from None
    if len(rows) < 2:
        raise UsageError("CSV needs a header and at least one row", path)
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float)
    except ValueError:
        raise UsageError("CSV body must be numeric", path) from None
    return rows[0], data


# --------------------------------------------------------------------------
# subcommands


def cmd_transform(args, out):
    dist, t = args.dist, args.t_grid
    nu = np.atleast_1d(wl.forward(dist, args.alpha, t))
    g = np.full(t.shape, float(dist.zero_atom))
    nz = t != 0
    g[nz] = wl.g_of(dist, args.alpha, np.abs(t[nz]))
    write_csv(out, ["t", "transform", "G"], [t, nu, g])
    return EXIT_OK


def cmd_invert(args, out):
    header, data = read_csv(args.transform)
    cols = [h.strip() for h in header]
    if "t" not in cols or "G" not in cols:
        raise UsageError("transform CSV needs columns t and G", args.transform)
    t, g = data[:, cols.index("t")], data[:, cols.index("G")]
    keep = t > 0
    t, g = t[keep], g[keep]
    if t.size < 4 or np.any(np.diff(t) <= 0):
        raise UsageError("need at least 4 strictly increasing positive t values", args.transform)
    spline = CubicSpline(t, g)
    # central differences stay inside the tabulated range
    inner = (t - wl.fd_step(t) >= t[0]) & (t + wl.fd_step(t) <= t[-1])
    f = wl.inverse(wl.TransformFn(args.alpha, spline), t[inner])
    write_csv(out, ["t", "F"], [t[inner], np.atleast_1d(f)])
    return EXIT_OK


def cmd_convolve(args, out):
    t = args.t_grid
    if np.any(t <= 0):
        raise UsageError("t-grid must be positive for convolve", args.t_grid_raw)
    h = np.atleast_1d(kd.kernel_cdf_h(args.x, args.y, t, args.alpha))
    write_csv(out, ["t", "h"], [t, h])
    return EXIT_OK


def cmd_power_cdf(args, out):
    t = args.t_grid
    f = np.atleast_1d(kd.power_cdf(kd.ConvolutionPowerLaw(args.dist, args.n, args.alpha), t))
    write_csv(out, ["t", "F_n"], [t, f])
    return EXIT_OK


def cmd_limit_cdf(args, out):
    t = args.t_grid
    write_csv(out, ["t", "F"], [t, np.atleast_1d(kd.stable_limit_cdf(t, args.alpha))])
    return EXIT_OK


def cmd_simulate(args, out):
    marg = args.marginals or []
    bad = [m for m in marg if m > args.steps]
    if bad:
        raise UsageError(f"marginal step exceeds --steps {args.steps}", str(bad[0]))
    cfg = wk.WalkConfig(
        args.dist, args.alpha, args.steps, args.paths, mode=args.mode, master_seed=args.seed, x0=args.x0
    )
    want_paths = args.out is not None and not marg
    batch = wk.simulate_batch(cfg, checkpoints=marg, store=want_paths, workers=args.workers)
    if args.out is not None:
        with open(args.out, "w", newline="") as fh:
            ids = np.arange(cfg.n_paths)
            if marg:
                steps = np.repeat(np.array(marg), cfg.n_paths)
                write_csv(fh, ["path_id", "step", "value"], [np.tile(ids, len(marg)), steps, np.concatenate([batch.marginals[m] for m in marg])])
            else:
                traj = batch.trajectories
                write_csv(
                    fh,
                    ["path_id", "step", "value"],
                    [np.repeat(ids, cfg.n_steps), np.tile(np.arange(1, cfg.n_steps + 1), cfg.n_paths), traj.ravel()],
                )
    write_csv(out, ["path_id", "tau", "overshoot"], [np.arange(cfg.n_paths), batch.tau, batch.overshoot])
    return EXIT_OK


def cmd_hitting(args, out):
    t = args.t_grid
    if np.any(t < 0):
        raise UsageError("t-grid must be non-negative for hitting", args.t_grid_raw)
    law = ex.ExcursionLaw(args.dist, args.alpha)
    cdf = np.zeros(t.shape)
    phi = np.zeros(t.shape)
    pos = t > 0
    if np.any(pos):
        cdf[pos] = ex.overshoot_cdf(law, t[pos])
        phi[pos] = ex.phi_partial_sum(law, t[pos], terms=args.terms)
    write_csv(out, ["t", "overshoot_cdf", "phi_partial"], [t, cdf, phi])
    return EXIT_OK


def cmd_wienerhopf(args, out):
    s_grid, u_grid = args.s_grid, args.u_grid
    if np.any((s_grid < 0) | (s_grid > 1)):
        raise UsageError("s-grid must lie in [0, 1]", args.s_grid_raw)
    law = ex.ExcursionLaw(args.dist, args.alpha)
    cfg = wk.WalkConfig(args.dist, args.alpha, args.steps, args.paths, master_seed=args.seed)
    batch = wk.simulate_batch(cfg, store=False, workers=args.workers)
    rows = []
    for s in s_grid:
        for u in u_grid:
            mc, se = ex.wiener_hopf_estimate(batch.tau, batch.overshoot, s, u, args.alpha)
            rows.append((s, u, float(ex.wiener_hopf_H(law, s, u)), mc, se))
    write_csv(out, ["s", "u", "H_closed", "H_mc", "stderr"], list(zip(*rows)))
    return EXIT_OK


def cmd_verify(args, out):
    reports = vf.run_suite(args.suite, seed=args.seed, scale=args.scale, workers=args.workers)
    for r in reports:
        out.write(f"{r.verdict} {r.check_id} {r.error_metric}={r.error:.3g} tol={r.tolerance:.3g}\n")
    failed = sum(not r.passed for r in reports)
    out.write(f"{len(reports) - failed}/{len(reports)} checks passed\n")
    if args.out:
        with open(args.out, "w") as fh:
            json.dump([r.to_dict() for r in reports], fh, indent=2)
            fh.write("\n")
    return EXIT_FAIL if failed else EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kendall", description="Kendall convolution, Williamson transform and Kendall random walks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        return sp

    def dist(sp):
        sp.add_argument("--dist", required=True, type=parse_dist, help="two-point:x=1.0 | pareto:p=2.0 | uniform | mixture:p=0.5 | table:<path>")

    def alpha(sp):
        sp.add_argument("--alpha", required=True, type=_positive_float)

    def grid(sp, name="--t-grid", required=True):
        sp.add_argument(name, required=required, help="start:stop:count")

    def seed(sp):
        sp.add_argument("--seed", type=int, default=None, help="master seed (default: $KENDALL_SEED or 0)")

    def workers(sp):
        sp.add_argument("--workers", type=_positive_int, default=1)

    sp = add("transform", cmd_transform, "Williamson transform of a step law")
    dist(sp), alpha(sp), grid(sp)

    sp = add("invert", cmd_invert, "recover F from a transform CSV")
    sp.add_argument("--transform", required=True, help="CSV produced by 'transform'")
    alpha(sp)

    sp = add("convolve", cmd_convolve, "mass of (0, t) under the convolution of two point masses")
    sp.add_argument("--x", required=True, type=float)
    sp.add_argument("--y", required=True, type=float)
    alpha(sp), grid(sp)

    sp = add("power-cdf", cmd_power_cdf, "CDF of the n-fold convolution power")
    dist(sp)
    sp.add_argument("--n", required=True, type=_positive_int)
    alpha(sp), grid(sp)

    sp = add("limit-cdf", cmd_limit_cdf, "CDF of the stable limit law")
    alpha(sp), grid(sp)

    sp = add("simulate", cmd_simulate, "simulate walks; first-passage records go to stdout")
    dist(sp), alpha(sp)
    sp.add_argument("--steps", required=True, type=_positive_int)
    sp.add_argument("--paths", required=True, type=_positive_int)
    sp.add_argument("--mode", choices=("kernel", "recursion"), default="kernel")
    sp.add_argument("--x0", type=float, default=0.0)
    sp.add_argument("--out", help="write path values (path_id, step, value) here")
    sp.add_argument("--marginals", type=_int_list, help="comma-separated steps; restricts --out to these steps")
    seed(sp), workers(sp)

    sp = add("hitting", cmd_hitting, "overshoot CDF and partial sums of the first-passage series")
    dist(sp), alpha(sp), grid(sp)
    sp.add_argument("--terms", type=_positive_int, default=60)

    sp = add("wienerhopf", cmd_wienerhopf, "closed-form and simulated joint transform of (tau, overshoot)")
    dist(sp), alpha(sp)
    grid(sp, "--s-grid"), grid(sp, "--u-grid")
    sp.add_argument("--paths", type=_positive_int, default=100_000)
    sp.add_argument("--steps", type=_positive_int, default=60)
    seed(sp), workers(sp)

    sp = add("verify", cmd_verify, "run verification suites")
    sp.add_argument("--suite", choices=("all", *vf.SUITES), default="all")
    sp.add_argument("--scale", type=_positive_float, default=1.0, help="sample-size multiplier (1 = desk scale)")
    sp.add_argument("--out", help="write the JSON report here")
    seed(sp), workers(sp)
    return p


def main(argv: Sequence[str] | None = None, stdout=None) -> int:
    out = stdout if stdout is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "seed", 0) is None:
            args.seed = _default_seed()
        for name in ("t_grid", "s_grid", "u_grid"):
            raw = getattr(args, name, None)
            if raw is not None:
                setattr(args, name + "_raw", raw)
                setattr(args, name, parse_grid(raw))
        return args.func(args, out)
    except UsageError as err:
        print(f"kendall: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ArithmeticError, wk.ResourceExhaustedError) as err:
        print(f"kendall: error: {str(err).splitlines()[0]}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as err:
        print(f"kendall: error: {err.strerror} (at {err.filename!r})", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
