"""Matplotlib figures written next to the CSV outputs.

Every function takes already-computed arrays and a destination path; nothing
here recomputes physics.
"""

from __future__ import annotations

import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

log = logging.getLogger(__name__)

RC = {
    "font.size": 9,
    "axes.labelsize": 10,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
}
# keeps PNG bytes stable between runs
_METADATA = {"Software": None}


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    kwargs = {"metadata": _METADATA} if path.suffix.lower() == ".png" else {}
    fig.savefig(path, bbox_inches="tight", **kwargs)
    plt.close(fig)
    log.info("wrote %s", path)
    return path


def trajectory(t_grid, probabilities, path, start_node: int | None = None) -> Path:
    """Heat map of |psi_i(t)|^2 over node (rows) and time (columns)."""
    t = np.asarray(t_grid)
    p = np.asarray(probabilities)
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(5.5, 3.2))
        mesh = ax.imshow(
            p,
            aspect="auto",
            origin="lower",
            extent=(t[0], t[-1], 0.5, p.shape[0] + 0.5),
            cmap="viridis",
            interpolation="nearest",
        )
        ax.set_xlabel("time $t$")
        ax.set_ylabel("node $i$")
        if start_node is not None:
            ax.set_title(f"start node {start_node}")
        fig.colorbar(mesh, ax=ax, label=r"$|\psi_i(t)|^2$")
        return _save(fig, path)


def longtime(pi_bar, ipr_bar, path) -> Path:
    """Two panels: the long-time transition matrix and IPR per start node."""
    pi_bar = np.asarray(pi_bar)
    ipr_bar = np.asarray(ipr_bar)
    n = ipr_bar.size
    nodes = np.arange(1, n + 1)
    top = np.flatnonzero(np.isclose(ipr_bar, ipr_bar.max(), rtol=0, atol=1e-9))
    with plt.rc_context(RC):
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8, 3.4))
        mesh = ax1.imshow(
            pi_bar, cmap="magma", origin="upper", extent=(0.5, n + 0.5, n + 0.5, 0.5)
        )
        ax1.set_xlabel("start node $j$")
        ax1.set_ylabel("node $i$")
        fig.colorbar(mesh, ax=ax1, label=r"$\bar\pi_{ij}$")
        ax2.plot(nodes, ipr_bar, "o-", ms=3, lw=0.8, color="k")
        ax2.plot(nodes[top], ipr_bar[top], "o", ms=9, mfc="none", mec="tab:red")
        ax2.set_xlabel("start node $j$")
        ax2.set_ylabel(r"$\overline{\mathrm{IPR}}_j$")
        return _save(fig, path)


def ensemble_curves(curves, path, labels=None, log_y: bool = True) -> Path:
    """Mean IPR curves with one-standard-error bands."""
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(4.5, 3.2))
        for k, c in enumerate(curves):
            label = labels[k] if labels else None
            (line,) = ax.plot(c.t_grid, c.mean_ipr, lw=1.0, label=label)
            ax.fill_between(
                c.t_grid,
                c.mean_ipr - c.stderr,
                c.mean_ipr + c.stderr,
                color=line.get_color(),
                alpha=0.25,
                lw=0,
            )
        if log_y:
            ax.set_yscale("log")
        ax.set_xlabel("time $t$")
        ax.set_ylabel("IPR")
        if labels:
            ax.legend(frameon=False)
        return _save(fig, path)


def gap_curves(depths, delta_abs, delta_rel, path) -> Path:
    """Absolute and relative long-time IPR gaps against recursion depth."""
    with plt.rc_context(RC):
        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(7, 3))
        ax1.plot(depths, delta_abs, "o-", color="k", ms=4)
        ax1.set_xlabel("depth $d$")
        ax1.set_ylabel(r"$\Delta\overline{\mathrm{IPR}}$")
        ax2.plot(depths, delta_rel, "s-", color="tab:blue", ms=4)
        ax2.set_xlabel("depth $d$")
        ax2.set_ylabel(r"$\delta\overline{\mathrm{IPR}}$")
        return _save(fig, path)
