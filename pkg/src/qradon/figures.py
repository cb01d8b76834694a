"""Matplotlib renderings written next to the delimited outputs.

All functions save PNG files and return the path; nothing is shown
interactively (Agg backend).
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

__all__ = [
    "save_table_heatmap",
    "save_image_grid",
    "save_detection_overlay",
    "save_bench_loglog",
]


def save_table_heatmap(values, path, title="", xlabel="slope index k", ylabel="intercept l"):
    values = np.asarray(values, dtype=float)
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    im = ax.imshow(values, aspect="auto", origin="upper", cmap="viridis")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    fig.colorbar(im, ax=ax, shrink=0.85)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return Path(path)


def save_image_grid(panels, path, suptitle=""):
    """Row of gray-scale panels; ``panels`` is a list of (title, 2-D array)."""
    fig, axes = plt.subplots(1, len(panels), figsize=(3.2 * len(panels), 3.4))
    if len(panels) == 1:
        axes = [axes]
    for ax, (title, data) in zip(axes, panels):
        ax.imshow(np.asarray(data, dtype=float), cmap="gray", origin="upper")
        ax.set_title(title, fontsize=9)
        ax.set_xticks([])
        ax.set_yticks([])
    if suptitle:
        fig.suptitle(suptitle)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return Path(path)


def save_detection_overlay(image_data, detection, path):
    """Image with the detected line traced in its wrapped lattice form."""
    data = np.asarray(image_data, dtype=float)
    n = data.shape[0]
    idx = np.arange(n)
    if math.isinf(detection.slope):
        xs = np.full(n, detection.intercept % n)
        ys = idx.astype(float)
    elif abs(detection.slope) <= 1.0:
        xs = idx.astype(float)
        ys = (detection.intercept + detection.slope * idx) % n
    else:
        ys = idx.astype(float)
        xs = (detection.intercept + idx / detection.slope) % n
    fig, ax = plt.subplots(figsize=(4.6, 4.6))
    ax.imshow(data, cmap="gray", origin="upper")
    ax.scatter(xs, ys, s=3, c="red", marker=".")
    slope = "vertical" if math.isinf(detection.slope) else f"{detection.slope:.3f}"
    ax.set_title(f"slope={slope}  intercept={detection.intercept:.0f}  score={detection.score:.3f}")
    ax.set_xlim(-0.5, n - 0.5)
    ax.set_ylim(n - 0.5, -0.5)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return Path(path)


def save_bench_loglog(results, path):
    fig, ax = plt.subplots(figsize=(5.2, 4.2))
    for res in results:
        ax.loglog(res.sizes, res.median_seconds, "o-", label=f"{res.transform} (slope {res.slope:.2f})")
    ax.set_xlabel("image side n")
    ax.set_ylabel("median wall time [s]")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return Path(path)
