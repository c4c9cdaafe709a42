"""Synthetic desk-scale dataset.

Stands in for real captures: latent joint trajectories are sums of seeded
low-frequency sinusoids, and each CSI-like frame is a fixed random linear map
of the flattened skeleton concatenated with its frame difference, plus white
noise. The signal therefore provably encodes both position and velocity, so
a linear decoder (and a fortiori the network) can recover the skeleton.
"""

from dataclasses import dataclass

import numpy as np

from .frames import AlignedSequence
from .skeleton import SkeletonSequence
from .windows import CsiWindow, slide_windows

_ACTIONS = ("still", "wave", "walk", "bend", "turn")


@dataclass(frozen=True)
class SynthConfig:
    num_clips: int = 8
    clip_len: int = 9
    window: int = 3
    stride: int = 2
    joints: int = 17
    coord_dim: int = 2
    noise_sigma: float = 0.0
    seed: int = 0
    channels: int = 3
    rows: int = 90
    steps: int = 5

    def __post_init__(self):
        if self.num_clips < 1:
            raise ValueError(f"num_clips must be >= 1, got {self.num_clips}")
        if self.clip_len < self.window:
            raise ValueError(
                f"clip_len {self.clip_len} is shorter than window {self.window}"
            )
        if self.coord_dim not in (2, 3):
            raise ValueError(f"coord_dim must be 2 or 3, got {self.coord_dim}")
        if self.noise_sigma < 0:
            raise ValueError(f"noise_sigma must be >= 0, got {self.noise_sigma}")


def _trajectory(rng: np.random.Generator, cfg: SynthConfig) -> np.ndarray:
    """Smooth latent joint track: (clip_len, joints, coord_dim)."""
    t = np.arange(cfg.clip_len)[:, None, None]
    base = rng.uniform(-1.0, 1.0, size=(1, cfg.joints, cfg.coord_dim))
    coords = np.broadcast_to(base, (cfg.clip_len, cfg.joints, cfg.coord_dim)).copy()
    for k in range(1, 4):
        amp = rng.uniform(0.05, 0.4, size=(1, cfg.joints, cfg.coord_dim)) / k
        freq = rng.uniform(0.25, 1.5, size=(1, cfg.joints, cfg.coord_dim))
        phase = rng.uniform(0.0, 2.0 * np.pi, size=(1, cfg.joints, cfg.coord_dim))
        coords += amp * np.sin(2.0 * np.pi * freq * t / cfg.clip_len + phase)
    return coords


def mixing_matrix(cfg: SynthConfig) -> np.ndarray:
    """The fixed skeleton-to-CSI linear map drawn from the dataset seed."""
    rng = np.random.default_rng(cfg.seed)
    feat_dim = 2 * cfg.joints * cfg.coord_dim
    out_dim = cfg.channels * cfg.rows * cfg.steps
    return rng.normal(size=(out_dim, feat_dim)) / np.sqrt(feat_dim)


def clip_features(coords: np.ndarray) -> np.ndarray:
    """Per-frame features: flattened coordinates and frame differences."""
    frames = coords.shape[0]
    flat = coords.reshape(frames, -1)
    diff = np.zeros_like(flat)
    diff[1:] = flat[1:] - flat[:-1]
    return np.concatenate([flat, diff], axis=1)


def generate_clips(cfg: SynthConfig) -> list[tuple[AlignedSequence, str, str]]:
    """Seeded clips as (aligned sequence, action label, subject id) tuples."""
    mix = mixing_matrix(cfg)
    rng = np.random.default_rng(cfg.seed + 1)
    clips = []
    for i in range(cfg.num_clips):
        coords = _trajectory(rng, cfg)
        feats = clip_features(coords)
        csi = (feats @ mix.T).reshape(cfg.clip_len, cfg.channels, cfg.rows, cfg.steps)
        if cfg.noise_sigma > 0:
            csi = csi + cfg.noise_sigma * rng.normal(size=csi.shape)
        aligned = AlignedSequence(csi, SkeletonSequence(coords, units="pixels"))
        clips.append((aligned, _ACTIONS[i % len(_ACTIONS)], f"subject{i % 3}"))
    return clips


def generate_windows(cfg: SynthConfig) -> list[CsiWindow]:
    """Model-ready windows cut from the seeded clips."""
    out = []
    for i, (aligned, action, subject) in enumerate(generate_clips(cfg)):
        out.extend(
            slide_windows(
                aligned,
                cfg.window,
                cfg.stride,
                action_label=action,
                subject_id=subject,
                clip_id=f"clip{i:04d}",
            )
        )
    return out
