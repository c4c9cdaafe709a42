"""Loader for MMFi-style 3D datasets.

Expects a dataset directory in the clip-container format (see ``manifest``)
with 3D joint tracks in millimeters. Window length 10 with stride 3 and a
3:1 train/test split at clip granularity follow the public protocol used for
that dataset.
"""

from dataclasses import dataclass
from pathlib import Path

from .manifest import MANIFEST_NAME, load_windows
from .splits import SplitSpec, split
from .windows import CsiWindow


@dataclass(frozen=True)
class MmfiProtocol:
    window: int = 10
    stride: int = 3
    train_ratio: float = 0.75
    seed: int = 0
    confidence_min: float = 0.1


def load_mmfi_style(root, protocol: MmfiProtocol = MmfiProtocol()) -> list[CsiWindow]:
    """Load all windows from an MMFi-style directory (or manifest path)."""
    root = Path(root)
    manifest = root / MANIFEST_NAME if root.is_dir() else root
    windows = load_windows(
        manifest,
        protocol.window,
        protocol.stride,
        confidence_min=protocol.confidence_min,
        units="millimeters",
    )
    for w in windows:
        if w.skeleton.coord_dim != 3:
            raise ValueError(
                f"MMFi-style data must be 3-D; clip {w.clip_id} has "
                f"coordinate dim {w.skeleton.coord_dim}"
            )
    return windows


def mmfi_split(windows: list[CsiWindow], protocol: MmfiProtocol = MmfiProtocol()):
    """The protocol's 3:1 clip-level split."""
    return split(windows, SplitSpec(protocol.train_ratio, protocol.seed, "clip"))
