"""Figure rendering for the command-line report paths.

Every helper writes a single PNG next to the delimited output and returns
the path it wrote.  Rendering always goes through the Agg backend so the
CLI works headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "trajectory_figure",
    "verification_figure",
    "spectrum_figure",
    "wavefunction_figure",
]

_DPI = 150


def trajectory_figure(columns: dict[str, np.ndarray], path: Path) -> Path:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.6, 4.0))
    ax1.plot(columns["t"], columns["x"], lw=1.2, label="x")
    ax1.plot(columns["t"], columns["xdot"], lw=1.0, ls="--", label="x'")
    ax1.set_xlabel("t")
    ax1.legend(frameon=False)
    ax1.set_title("time series")
    ax2.plot(columns["x"], columns["ptilde"], lw=1.2)
    ax2.set_xlabel("x")
    ax2.set_ylabel("scaled momentum")
    ax2.set_title("phase orbit")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def verification_figure(report, path: Path) -> Path:
    names = [c.name for c in report.checks]
    margins = [c.residual / c.threshold for c in report.checks]
    colors = ["#2a7e43" if c.passed else "#b03a2e" for c in report.checks]
    fig, ax = plt.subplots(figsize=(8.0, 0.42 * len(names) + 1.2))
    floor = 1e-16
    ax.barh(range(len(names)), [max(m, floor) for m in margins], color=colors)
    ax.axvline(1.0, color="k", lw=1.0, ls=":")
    ax.set_yticks(range(len(names)), names, fontsize=8)
    ax.set_xscale("log")
    ax.set_xlabel("residual / threshold (pass left of dotted line)")
    ax.invert_yaxis()
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def spectrum_figure(result, path: Path) -> Path:
    ns = [lv.n for lv in result.levels]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 4.0))
    ax1.plot(ns, result.analytic, "o", ms=9, mfc="none", label="analytic")
    ax1.plot(ns, result.numeric, "x", ms=6, label="numeric")
    ax1.plot(
        ns, [lv.analytic_printed for lv in result.levels], "s", ms=4, mfc="none",
        label="misprinted form",
    )
    ax1.set_xlabel("level n")
    ax1.set_ylabel("scaled energy")
    ax1.legend(frameon=False)
    ax2.semilogy(ns, [max(lv.rel_err, 1e-17) for lv in result.levels], "o-")
    ax2.set_xlabel("level n")
    ax2.set_ylabel("relative error vs analytic")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path


def wavefunction_figure(wf, phi_numeric: np.ndarray, path: Path) -> Path:
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.6, 4.0))
    ax1.plot(wf.y, wf.phi, lw=1.4, label="analytic")
    ax1.plot(wf.y, phi_numeric, lw=0.9, ls="--", label="numeric")
    ax1.set_xlabel("y")
    ax1.set_ylabel(f"phi_{wf.level}")
    ax1.legend(frameon=False)
    ax2.plot(wf.ptilde, wf.psi_ptilde, lw=1.2, color="#7d3c98")
    ax2.set_xlabel("scaled momentum")
    ax2.set_ylabel("psi")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)
    return path
