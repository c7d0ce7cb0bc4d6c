"""Matplotlib figures for sweep and Green's-function CSVs, written as SVG."""
from __future__ import annotations

from pathlib import Path

import matplotlib
from matplotlib.figure import Figure

from .io import read_csv

# fixed salt and no timestamp: identical inputs give identical SVG bytes
matplotlib.rcParams["svg.hashsalt"] = "stdmap-lyap"
SVG_METADATA = {"Date": None, "Creator": None}


def _save(fig: Figure, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata=SVG_METADATA)
    return path


def plot_sweep(E, mean, stderr, path, title=""):
    """Mean exponent against energy with a 2-standard-error band."""
    fig = Figure(figsize=(6.4, 4.0))
    ax = fig.add_subplot()
    lo = [m - 2 * s for m, s in zip(mean, stderr)]
    hi = [m + 2 * s for m, s in zip(mean, stderr)]
    ax.fill_between(E, lo, hi, color="C0", alpha=0.3, linewidth=0)
    ax.plot(E, mean, color="C0", lw=1.2, label=r"$L_N(E)$")
    ax.axhline(0.0, color="k", lw=0.6)
    ax.set_xlabel("E")
    ax.set_ylabel("mean Lyapunov exponent")
    if title:
        ax.set_title(title, fontsize=10)
    ax.legend(frameon=False)
    fig.tight_layout()
    return _save(fig, path)


def plot_defect(t, defect, path, title=""):
    fig = Figure(figsize=(6.4, 4.0))
    ax = fig.add_subplot()
    ax.plot(t, defect, "o-", ms=3, lw=1.0)
    ax.set_xlabel("t")
    ax.set_ylabel(r"max $|\mathrm{Re}\,G(t+i\epsilon)(n,n)|$")
    if title:
        ax.set_title(title, fontsize=10)
    fig.tight_layout()
    return _save(fig, path)


def plot_csv(csv_path, out_path):
    """Render a sweep or green CSV, chosen by its header."""
    comments, header, rows = read_csv(csv_path)
    keep = ("map", "lambda", "alpha", "N", "samples", "epsilon", "sites")
    title = ", ".join(c for c in comments if c.split("=")[0] in keep)
    if header[:3] == ["E", "mean", "stderr"]:
        cols = list(zip(*rows))
        return plot_sweep([float(v) for v in cols[0]], [float(v) for v in cols[1]],
                          [float(v) for v in cols[2]], out_path, title)
    if header and header[0] == "t":
        worst = {}
        for row in rows:
            t = float(row[0])
            worst[t] = max(worst.get(t, 0.0), float(row[-1]))
        ts = sorted(worst)
        return plot_defect(ts, [worst[t] for t in ts], out_path, title)
    raise ValueError(f"{csv_path}: no plot for columns {header}")
