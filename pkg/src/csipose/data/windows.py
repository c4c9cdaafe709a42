"""Sliding windows over aligned frame/skeleton sequences.

One window of T frames is one model input; its velocity ground truth is the
displacement between the last and first skeleton frames of the window.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .frames import AlignedSequence
from .skeleton import SkeletonSequence

log = logging.getLogger(__name__)


@dataclass
class CsiWindow:
    frames: np.ndarray  # (T, ch, rows, steps)
    skeleton: SkeletonSequence  # T frames
    velocity_gt: np.ndarray = field(default=None)  # (J, C), coords[-1] - coords[0]
    action_label: str | None = None
    subject_id: str | None = None
    clip_id: str | None = None

    def __post_init__(self):
        self.frames = np.asarray(self.frames, dtype=np.float64)
        if self.frames.ndim != 4:
            raise ValueError(f"frames must be (T, ch, rows, steps), got shape {self.frames.shape}")
        if self.frames.shape[0] != self.skeleton.num_frames:
            raise ValueError(
                f"window has {self.frames.shape[0]} frames but "
                f"{self.skeleton.num_frames} skeletons"
            )
        expected = self.skeleton.coords[-1] - self.skeleton.coords[0]
        if self.velocity_gt is None:
            self.velocity_gt = expected
        elif not np.array_equal(np.asarray(self.velocity_gt), expected):
            raise ValueError("velocity_gt does not equal coords[-1] - coords[0]")

    @property
    def length(self) -> int:
        return self.frames.shape[0]


def window_count(length: int, window: int, stride: int) -> int:
    """Number of windows of size ``window`` at stride ``stride`` in ``length`` items."""
    if window < 1 or stride < 1:
        raise ValueError(f"window and stride must be >= 1, got {window} and {stride}")
    if length < window:
        return 0
    return (length - window) // stride + 1


def slide_windows(
    aligned: AlignedSequence,
    window: int,
    stride: int,
    action_label: str | None = None,
    subject_id: str | None = None,
    clip_id: str | None = None,
) -> list[CsiWindow]:
    """Cut every window of ``window`` consecutive pairs, advancing by ``stride``."""
    count = window_count(len(aligned), window, stride)
    if count == 0:
        log.info(
            "sequence of length %d is shorter than window %d; no windows",
            len(aligned),
            window,
        )
        return []
    coords = aligned.skeleton.coords
    conf = aligned.skeleton.confidence
    out = []
    for w in range(count):
        start = w * stride
        stop = start + window
        skel = SkeletonSequence(
            coords[start:stop],
            conf[start:stop] if conf is not None else None,
            aligned.skeleton.units,
        )
        out.append(
            CsiWindow(
                aligned.frames[start:stop],
                skel,
                action_label=action_label,
                subject_id=subject_id,
                clip_id=clip_id,
            )
        )
    return out


def cut_clips(aligned: AlignedSequence, clip_len: int) -> list[AlignedSequence]:
    """Chop a sequence into disjoint consecutive clips; the remainder is dropped."""
    if clip_len < 1:
        raise ValueError(f"clip_len must be >= 1, got {clip_len}")
    count = len(aligned) // clip_len
    clips = []
    for c in range(count):
        start = c * clip_len
        stop = start + clip_len
        conf = aligned.skeleton.confidence
        clips.append(
            AlignedSequence(
                aligned.frames[start:stop],
                SkeletonSequence(
                    aligned.skeleton.coords[start:stop],
                    conf[start:stop] if conf is not None else None,
                    aligned.skeleton.units,
                ),
            )
        )
    return clips
