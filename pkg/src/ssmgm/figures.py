"""Matplotlib renderings written next to the text reports."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .evalkit import AccuracyReport, error_map  # noqa: E402
from .pixelio import DisparityMap  # noqa: E402


def _masked(d: DisparityMap) -> np.ma.MaskedArray:
    return np.ma.masked_array(d.disp, ~d.valid)


def _show(ax, img, title, vmax, cmap="viridis"):
    cm = plt.get_cmap(cmap).copy()
    cm.set_bad("black")
    im = ax.imshow(img, cmap=cm, vmin=0, vmax=vmax, interpolation="nearest")
    ax.set_title(title, fontsize=10)
    ax.set_xticks([])
    ax.set_yticks([])
    return im


def plot_disparity(d: DisparityMap, path, title: str = "disparity", vmax: int | None = None) -> Path:
    vmax = vmax or max(int(d.disp.max()), 1)
    fig, ax = plt.subplots(figsize=(6, 6 * d.height / d.width + 0.6))
    im = _show(ax, _masked(d), title, vmax)
    fig.colorbar(im, ax=ax, fraction=0.046, pad=0.04)
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return Path(path)


def plot_comparison(est: DisparityMap, gt: DisparityMap, report: AccuracyReport, path,
                    title: str = "") -> Path:
    """Estimate, ground truth, and the thresholded error map side by side."""
    vmax = max(int(gt.disp.max()), int(est.disp.max()), 1)
    err = error_map(est, gt)
    fig, axes = plt.subplots(1, 3, figsize=(13, 4.4 * est.height / est.width + 0.8))
    _show(axes[0], _masked(est), "estimate", vmax)
    _show(axes[1], _masked(gt), "ground truth", vmax)
    bad = np.ma.masked_array((err > report.tolerance).astype(float), err.mask)
    _show(axes[2], bad, f"|error| > {report.tolerance:g} px", 1, cmap="gray")
    fig.suptitle(f"{title} rmse={report.rmse:.2f}  erroneous={report.pct_erroneous:.1f}%".strip())
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return Path(path)


def plot_error_histogram(est: DisparityMap, gt: DisparityMap, report: AccuracyReport, path) -> Path:
    err = error_map(est, gt).compressed()
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.hist(err, bins=np.arange(0, max(int(err.max(initial=0)), 1) + 2) - 0.5, color="0.3")
    ax.axvline(report.tolerance + 0.5, color="C3", lw=1)
    ax.set_yscale("log")
    ax.set_xlabel("|disparity error| (px)")
    ax.set_ylabel("pixels")
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return Path(path)
