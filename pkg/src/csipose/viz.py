"""Simple skeleton plot export for prediction inspection."""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .data.skeleton import COCO17_LIMBS


def _draw(ax, coords: np.ndarray, color: str, label: str) -> None:
    xy = coords[:, :2]
    ax.scatter(xy[:, 0], xy[:, 1], s=12, c=color, label=label)
    if coords.shape[0] == 17:
        for a, b in COCO17_LIMBS:
            ax.plot([xy[a, 0], xy[b, 0]], [xy[a, 1], xy[b, 1]], c=color, lw=1, alpha=0.6)


def save_skeleton_plot(path, pred: np.ndarray, gt: np.ndarray | None, units: str) -> None:
    """Plot predicted (and optionally ground-truth) joints of one frame."""
    fig, ax = plt.subplots(figsize=(4, 4))
    if gt is not None:
        _draw(ax, np.asarray(gt), "tab:green", "ground truth")
    _draw(ax, np.asarray(pred), "tab:red", "prediction")
    ax.set_aspect("equal")
    ax.invert_yaxis()  # image coordinates: y grows downward
    ax.set_xlabel(units)
    ax.legend(loc="upper right", fontsize=7)
    fig.tight_layout()
    fig.savefig(Path(path), dpi=100)
    plt.close(fig)
