"""Static plot artifacts (SVG line plots and field heatmaps)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _save(fig, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)


def line_plot(path, x, series: dict, xlabel="", ylabel="", title="", logy=False):
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, y in series.items():
        if logy:
            ax.semilogy(x, np.abs(y), label=label)
        else:
            ax.plot(x, y, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if len(series) > 1:
        ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    _save(fig, path)


def scatter_plot(path, x, series: dict, xlabel="", ylabel="", title=""):
    fig, ax = plt.subplots(figsize=(6, 4))
    for label, y in series.items():
        ax.plot(x, y, "o-", markersize=3, label=label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if len(series) > 1:
        ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    _save(fig, path)


def heatmap(path, values, title=""):
    fig, ax = plt.subplots(figsize=(5, 4.2))
    im = ax.imshow(
        values.T,
        origin="lower",
        extent=[-np.pi, np.pi, -np.pi, np.pi],
        cmap="gray",
        vmin=-1.05,
        vmax=1.05,
    )
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    if title:
        ax.set_title(title)
    fig.colorbar(im, ax=ax, shrink=0.85)
    _save(fig, path)
