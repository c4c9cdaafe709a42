"""Seeded train/test splitting.

At clip granularity all windows cut from one clip land on the same side,
so no test window shares a clip with a training window.
"""

from dataclasses import dataclass

import numpy as np

from .windows import CsiWindow


@dataclass(frozen=True)
class SplitSpec:
    train_ratio: float
    seed: int = 0
    granularity: str = "clip"  # "clip" | "window"

    def __post_init__(self):
        if not 0.0 < self.train_ratio < 1.0:
            raise ValueError(f"train_ratio must be in (0, 1), got {self.train_ratio}")
        if self.granularity not in ("clip", "window"):
            raise ValueError(f"granularity must be 'clip' or 'window', got {self.granularity!r}")


def split(windows: list[CsiWindow], spec: SplitSpec) -> tuple[list[CsiWindow], list[CsiWindow]]:
    """Disjoint, exhaustive, seed-deterministic split into (train, test)."""
    if not windows:
        raise ValueError("cannot split an empty dataset")
    if spec.granularity == "clip":
        if any(w.clip_id is None for w in windows):
            raise ValueError("clip-granularity split requires every window to carry a clip_id")
        keys = list(dict.fromkeys(w.clip_id for w in windows))
    else:
        keys = list(range(len(windows)))

    rng = np.random.default_rng(spec.seed)
    perm = rng.permutation(len(keys))
    n_train = int(len(keys) * spec.train_ratio + 1e-9)
    train_keys = {keys[i] for i in perm[:n_train]}

    if spec.granularity == "clip":
        train = [w for w in windows if w.clip_id in train_keys]
        test = [w for w in windows if w.clip_id not in train_keys]
    else:
        train = [w for i, w in enumerate(windows) if i in train_keys]
        test = [w for i, w in enumerate(windows) if i not in train_keys]
    return train, test
