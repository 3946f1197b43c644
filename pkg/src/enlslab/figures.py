"""File-output plotting for the report commands.

Everything renders through Agg straight to disk; no interactive backend is
ever touched, so the CLI can run headless.  Figures are written atomically
like the delimited outputs (render to a temp name, then rename).
"""

import os
import tempfile

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

matplotlib.rcParams.update(
    {
        "figure.figsize": (6.4, 4.0),
        "figure.dpi": 130,
        "savefig.dpi": 130,
        "font.size": 9,
        "axes.labelsize": 9,
        "axes.titlesize": 10,
        "legend.fontsize": 8,
        "xtick.labelsize": 8,
        "ytick.labelsize": 8,
        "axes.grid": True,
        "grid.alpha": 0.3,
        "lines.linewidth": 1.2,
    }
)


def new_axes(nrows=1, ncols=1, height=None):
    w, h = matplotlib.rcParams["figure.figsize"]
    if height is not None:
        h = height
    fig, ax = plt.subplots(nrows=nrows, ncols=ncols, figsize=(w, h))
    return fig, ax


def save_figure(fig, path):
    """Render to path (format from the suffix) and close; returns path."""
    path = os.fspath(path)
    d = os.path.dirname(path) or "."
    ext = os.path.splitext(path)[1].lstrip(".") or "png"
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix="~")
    os.close(fd)
    try:
        fig.savefig(tmp, format=ext, bbox_inches="tight")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    finally:
        plt.close(fig)
    return path


def plot_trajectory(traj, path):
    """Initial/final profile |u| and the final spectrum magnitude."""
    from .grid import to_spectrum

    first, last = traj.snapshots[0], traj.snapshots[-1]
    fig, (ax0, ax1) = new_axes(ncols=2)
    x = first.grid.x
    ax0.plot(x, np.abs(first.values), label=f"t = {first.t:g}")
    ax0.plot(x, np.abs(last.values), label=f"t = {last.t:g}")
    ax0.set_xlabel("x")
    ax0.set_ylabel("|u|")
    ax0.legend()
    sp = to_spectrum(last)
    order = np.argsort(sp.grid.xi)
    mag = np.abs(sp.coeffs[order])
    ax1.semilogy(sp.grid.xi[order], np.maximum(mag, 1e-20))
    ax1.set_xlabel("xi")
    ax1.set_ylabel("|u_hat|")
    ax1.set_title(f"spectrum at t = {last.t:g}")
    fig.suptitle(f"M = {first.grid.M}, L = {first.grid.L:g}")
    return save_figure(fig, path)


def plot_l2_drift(times, norms, path):
    """Relative L2 drift along a trajectory, on a log scale."""
    times = np.asarray(times)
    norms = np.asarray(norms)
    rel = np.abs(norms - norms[0]) / norms[0]
    fig, ax = new_axes()
    ax.semilogy(times, np.maximum(rel, 1e-18), marker=".")
    ax.set_xlabel("t")
    ax.set_ylabel("relative L2 drift")
    return save_figure(fig, path)


def plot_energy_series(reports, path):
    """E1 and E2 over the window, with the E2 drift below."""
    t = np.array([r.t for r in reports])
    fig, (ax0, ax1) = new_axes(nrows=2, height=5.2)
    ax0.plot(t, [r.E1 for r in reports], label="E1")
    ax0.plot(t, [r.E2 for r in reports], label="E2")
    ax0.set_ylabel("energy")
    ax0.legend()
    ax1.semilogy(t, np.maximum([r.drift_E2 for r in reports], 1e-18), marker=".")
    ax1.set_xlabel("t")
    ax1.set_ylabel("|E2(t) - E2(0)|")
    return save_figure(fig, path)


def plot_decay_sweep(result, path):
    """Log-log drift vs cutoff with the fitted line over the live points."""
    N = np.array(result.N_values)
    d = np.array(result.drift_values)
    live = np.array([n not in result.excluded for n in result.N_values])
    fig, ax = new_axes()
    ax.loglog(N[live], d[live], "o", label="drift")
    if (~live).any():
        ax.loglog(N[~live], d[~live], "x", label="below floor")
    if np.isfinite(result.fitted_slope) and live.sum() >= 2:
        ln, ld = np.log(N[live]), np.log(d[live])
        intercept = np.mean(ld) - result.fitted_slope * np.mean(ln)
        ax.loglog(
            N[live],
            np.exp(result.fitted_slope * ln + intercept),
            "--",
            label=f"slope {result.fitted_slope:.3f}",
        )
    ax.set_xlabel("N")
    ax.set_ylabel("sup window drift of E2")
    ax.legend()
    return save_figure(fig, path)


def plot_bound_sweep(reports_by_N, path):
    """Per-case max ratio against the cutoff (one line per case)."""
    cases = sorted({name for rep in reports_by_N.values() for name in rep})
    fig, ax = new_axes()
    Ns = sorted(reports_by_N)
    for name in cases:
        vals = [reports_by_N[N][name].max_ratio for N in Ns]
        ax.loglog(Ns, vals, marker="o", label=name)
    ax.set_xlabel("N")
    ax.set_ylabel("max |delta4| / bound")
    ax.legend(fontsize=7)
    return save_figure(fig, path)


def plot_trilinear_sweep(reports, path):
    """Directed and generic sup ratios against the bandwidth cap."""
    caps = [r.kx_cap for r in reports]
    fig, ax = new_axes()
    ax.semilogx(caps, [r.sup_ratio for r in reports], marker="o", base=2, label="generic sup")
    ax.semilogx(
        caps,
        [r.sup_ratio_directed for r in reports],
        marker="s",
        base=2,
        label="directed sup",
    )
    ax.set_xlabel("bandwidth cap")
    ax.set_ylabel("sup ratio")
    ax.legend()
    return save_figure(fig, path)


def plot_gauge_check(times, discrepancies, path):
    """Relative L2 gauge-vs-direct discrepancy over the window."""
    fig, ax = new_axes()
    ax.semilogy(times, np.maximum(discrepancies, 1e-18), marker=".")
    ax.set_xlabel("t")
    ax.set_ylabel("relative L2 discrepancy")
    return save_figure(fig, path)
