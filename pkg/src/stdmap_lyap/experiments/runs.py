"""Batch drivers behind the ``sweep``, ``recur`` and ``green`` subcommands."""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .. import cocycle, dynamics, potential, spectral
from ..dynamics import TorusPoint
from . import io
from .config import ExperimentConfig
from .plotting import plot_csv

log = logging.getLogger(__name__)


def _chunks(seq, n):
    n = max(1, min(n, len(seq)))
    size, extra = divmod(len(seq), n)
    out, start = [], 0
    for i in range(n):
        stop = start + size + (i < extra)
        out.append(seq[start:stop])
        start = stop
    return out


def sweep_estimates(cfg: ExperimentConfig, workers: int = 1):
    """Estimates for every grid energy, ordered by E.

    Work is split by energy; every chunk sees the same start points, so the
    result does not depend on ``workers``.
    """
    energies = cfg.energies()
    args = (cfg.N, cfg.map_spec(), cfg.phi(), cfg.samples, cfg.seed)
    if workers <= 1:
        return cocycle.lyapunov_sweep(energies, *args)
    parts = _chunks(energies, workers)
    with ProcessPoolExecutor(max_workers=len(parts)) as pool:
        futures = [pool.submit(cocycle.lyapunov_sweep, part, *args) for part in parts]
        return [est for f in futures for est in f.result()]


def run_sweep(cfg: ExperimentConfig, workers: int = 1, plot: bool = False):
    """Write the sweep CSV (and optionally an SVG next to it); return the paths."""
    estimates = sweep_estimates(cfg, workers)
    lam = cfg.lam if cfg.map == "standard" else float("nan")
    rows = [(e.E, e.mean, e.stderr, e.N, e.samples, lam, e.seed) for e in estimates]
    out = io.write_csv(cfg.out, io.SWEEP_COLUMNS, rows, cfg.echo())
    paths = [out]
    if plot:
        paths.append(plot_csv(out, out.with_suffix(".svg")))
    return paths


def start_points(cfg: ExperimentConfig) -> list[TorusPoint]:
    if cfg.x0 is not None:
        return [TorusPoint(dynamics.wrap(cfg.x0), dynamics.wrap(cfg.y0))]
    xs, ys = dynamics.uniform_points(cfg.seed, cfg.points)
    return [TorusPoint(float(x), float(y)) for x, y in zip(xs, ys)]


def recurrence_rows(cfg: ExperimentConfig):
    m, phi = cfg.map_spec(), cfg.phi()
    rows = []
    for i, p in enumerate(start_points(cfg)):
        events = potential.near_recurrences(p, m, cfg.delta, cfg.horizon)
        if not events:
            log.info("point %d: no return within %g by n=%d", i, cfg.delta, cfg.horizon)
            continue
        _, defects = potential.omega_limit_witness(p, m, phi, events, cfg.window_k)
        rows += [(i, p.x, p.y, e.time, e.distance, d) for e, d in zip(events, defects)]
    return rows


def run_recurrence(cfg: ExperimentConfig):
    out = io.write_csv(cfg.out, io.RECUR_COLUMNS, recurrence_rows(cfg), cfg.echo())
    return [out]


def green_window(cfg: ExperimentConfig) -> potential.PotentialWindow:
    """Potential on ``sites`` consecutive times centred on n = 0."""
    p = start_points(cfg)[0]
    n_from = -((cfg.sites - 1) // 2)
    return potential.sample_potential(p, cfg.map_spec(), cfg.phi(),
                                      n_from, n_from + cfg.sites - 1)


def green_report(cfg: ExperimentConfig, boundary: str = "transparent"):
    return spectral.reflectionless_defect(green_window(cfg), np.array(cfg.energies()),
                                          cfg.epsilon, cfg.center_width, boundary)


def run_green(cfg: ExperimentConfig, boundary: str = "transparent", plot: bool = False):
    rep = green_report(cfg, boundary)
    first = rep.sites[0]
    rows = []
    for i, t in enumerate(rep.A_grid):
        for j in range(rep.re_g.shape[1]):
            re, im = rep.re_g[i, j], rep.im_g[i, j]
            rows.append((float(t), first + j, cfg.epsilon, cfg.sites, cfg.center_width,
                         boundary, re, im, abs(re)))
    comments = cfg.echo() + [f"boundary={boundary}", f"max_defect={io.fmt(rep.defect)}"]
    out = io.write_csv(cfg.out, io.GREEN_COLUMNS, rows, comments)
    paths = [out]
    if plot:
        paths.append(plot_csv(out, out.with_suffix(".svg")))
    return paths
