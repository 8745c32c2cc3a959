"""Static SVG figures: prediction overlays, hysteresis loops, rocking histories, spectra."""

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from dynamics.history import ResponseHistory  # noqa: E402

plt.rcParams["svg.fonttype"] = "none"
plt.rcParams["svg.hashsalt"] = "surrogate"


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def overlay_plot(pred: ResponseHistory, truth: ResponseHistory, path: str | Path, title: str = "") -> Path:
    """One panel per DOF with the oracle and the rollout."""
    n = truth.ndof
    fig, axes = plt.subplots(n, 1, figsize=(8, 2.2 * n), sharex=True, squeeze=False)
    for j, ax in enumerate(axes[:, 0]):
        ax.plot(truth.times, truth.disp[:, j], color="black", linewidth=0.9, label="oracle")
        ax.plot(pred.times, pred.disp[:, j], color="tab:red", linewidth=0.9, linestyle="--", label="prediction")
        ax.set_ylabel(truth.labels[j])
        ax.legend(loc="upper right", fontsize="small")
    axes[-1, 0].set_xlabel("time (s)")
    if title:
        axes[0, 0].set_title(title)
    return _save(fig, path)


def hysteresis_plot(history: ResponseHistory, path: str | Path, title: str = "") -> Path:
    """Story shear against story drift, one panel per story."""
    n = history.ndof
    fig, axes = plt.subplots(1, n, figsize=(3.2 * n, 3.2), squeeze=False)
    for j, ax in enumerate(axes[0]):
        ax.plot(history.aux[f"drift{j + 1}"], history.aux[f"shear{j + 1}"], linewidth=0.7)
        ax.set_xlabel(f"drift {j + 1} (in)")
        ax.set_ylabel(f"shear {j + 1} (kip)")
        ax.axhline(0.0, color="grey", linewidth=0.4)
        ax.axvline(0.0, color="grey", linewidth=0.4)
    if title:
        fig.suptitle(title)
    return _save(fig, path)


def rocking_plot(history: ResponseHistory, path: str | Path, title: str = "") -> Path:
    """theta/alpha over time with impacts marked."""
    fig, ax = plt.subplots(figsize=(8, 3))
    ax.plot(history.times, history.aux["theta_norm"], linewidth=0.8)
    impacts = [e.time for e in history.events]
    if impacts:
        ax.plot(impacts, np.zeros(len(impacts)), "|", color="tab:red", markersize=6, label="impact")
        ax.legend(loc="upper right", fontsize="small")
    ax.set_xlabel("time (s)")
    ax.set_ylabel("theta / alpha")
    if title:
        ax.set_title(title)
    return _save(fig, path)


def spectrum_plot(periods: Sequence[float], spectra: dict[str, np.ndarray], path: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    for record_id, sa in spectra.items():
        ax.plot(periods, sa, linewidth=0.9, label=record_id)
    ax.set_xscale("log")
    ax.set_xlabel("period (s)")
    ax.set_ylabel("Sa (g)")
    if spectra:
        ax.legend(fontsize="small")
    return _save(fig, path)
