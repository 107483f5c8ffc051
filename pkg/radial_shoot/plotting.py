"""
SVG figures: solution curves and the label strip chart of a scan.
"""
import logging
import os

import matplotlib

matplotlib.use("Agg")

import numpy as np
from matplotlib import pyplot as plt

logger = logging.getLogger(__name__)

# Fixed ids and no date, so the same data always gives the same file.
matplotlib.rcParams["svg.hashsalt"] = "radial-shoot"
SVG_METADATA = {"Date": None, "Creator": None}

CURVE_POINTS = 2000

LABEL_COLORS = {
    "N": "#1f77b4",
    "G": "#d62728",
    "Q": "#2ca02c",
    "S": "#9467bd",
    "Upsilon": "#ff7f0e",
    "F": "#8c564b",
    "Undetermined": "#7f7f7f",
}


def _save(fig, path):
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    fig.savefig(path, format="svg", metadata=SVG_METADATA)
    plt.close(fig)
    logger.info("Wrote %s", path)
    return path


def curve_samples(traj, points=CURVE_POINTS):
    """u on an even radial grid over the computed part of a trajectory."""
    rs = np.linspace(0.0, traj.r_end, points)
    u, _ = traj.states(rs)
    return rs, u


def plot_curves(path, trajectories, labels=None, title=""):
    """
    Plot u(r) for one or more trajectories into a single SVG.

    Args:
        path (str): destination file.
        trajectories (list[Trajectory]): the curves.
        labels (list[str], optional): legend entries, one per curve.
        title (str): axes title.
    """
    labels = labels or [f"alpha = {t.config.alpha:.12g}" for t in trajectories]
    fig, ax = plt.subplots(figsize=(7, 4))
    for traj, label in zip(trajectories, labels):
        rs, u = curve_samples(traj)
        ax.plot(rs, u, linewidth=1.2, label=label)
    ax.axhline(0.0, color="black", linewidth=0.6)
    ax.set_xlabel("r")
    ax.set_ylabel("u(r)")
    if title:
        ax.set_title(title)
    ax.legend(loc="best", fontsize="small")
    fig.tight_layout()
    return _save(fig, path)


def plot_scan(path, report, title=""):
    """
    Strip chart: one coloured bar per grid point, height k.

    A scan held in gaps below gamma_star is drawn against -log10(gap).
    """
    gaps = report.gaps
    if gaps is None:
        grid, xlabel = np.asarray(report.alphas), "alpha"
    else:
        grid, xlabel = -np.log10(np.asarray(gaps)), "-log10(gamma_star - alpha)"
    ks = np.array([c.k for c in report.labels])
    colors = [LABEL_COLORS[c.label.value] for c in report.labels]
    fig, ax = plt.subplots(figsize=(8, 3))
    ax.scatter(grid, ks, c=colors, s=6, marker="s", linewidths=0)
    for name, color in LABEL_COLORS.items():
        if any(c.label.value == name for c in report.labels):
            ax.scatter([], [], c=color, s=12, marker="s", label=name)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("k")
    if title:
        ax.set_title(title)
    ax.legend(loc="upper left", fontsize="x-small", ncol=4)
    fig.tight_layout()
    return _save(fig, path)
