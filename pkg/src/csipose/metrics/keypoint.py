"""Keypoint accuracy metrics: PCK and MPJPE."""

import numpy as np

from ..data.skeleton import TORSO_DIAGONAL_JOINTS


def _check_pair(pred, gt):
    pred = np.asarray(pred, dtype=np.float64)
    gt = np.asarray(gt, dtype=np.float64)
    if pred.shape != gt.shape:
        raise ValueError(f"shape mismatch: predictions {pred.shape} vs ground truth {gt.shape}")
    if pred.ndim < 2:
        raise ValueError(f"expected (..., joints, dim) arrays, got shape {pred.shape}")
    return pred, gt


def joint_distances(pred, gt) -> np.ndarray:
    """Euclidean distance per joint: (..., joints)."""
    pred, gt = _check_pair(pred, gt)
    return np.linalg.norm(pred - gt, axis=-1)


def mpjpe(pred, gt) -> float:
    """Mean per-joint position error, in the input units."""
    return float(joint_distances(pred, gt).mean())


def per_joint_mpjpe(pred, gt) -> np.ndarray:
    """MPJPE per joint, averaged over frames: (joints,)."""
    d = joint_distances(pred, gt)
    return d.reshape(-1, d.shape[-1]).mean(axis=0)


def pck(pred, gt, alpha_pct: float, norm_lengths) -> tuple[np.ndarray, float]:
    """Percentage of correct keypoints at threshold alpha_pct.

    A joint is correct when its error is within alpha_pct percent of its
    frame's normalization length. Returns (per-joint percentages, average).
    """
    pred, gt = _check_pair(pred, gt)
    if pred.ndim != 3:
        raise ValueError(f"expected (frames, joints, dim), got shape {pred.shape}")
    norm_lengths = np.asarray(norm_lengths, dtype=np.float64)
    if norm_lengths.shape != (pred.shape[0],):
        raise ValueError(
            f"expected one normalization length per frame ({pred.shape[0]}), "
            f"got shape {norm_lengths.shape}"
        )
    if (norm_lengths <= 0).any():
        raise ValueError("normalization lengths must be positive")
    dist = joint_distances(pred, gt)
    correct = dist <= (alpha_pct / 100.0) * norm_lengths[:, None]
    per_joint = 100.0 * correct.mean(axis=0)
    return per_joint, float(per_joint.mean())


def torso_diagonal_lengths(gt) -> np.ndarray:
    """Per-frame torso diagonal (left shoulder to right hip) of COCO-17 skeletons."""
    gt = np.asarray(gt, dtype=np.float64)
    if gt.shape[1] != 17:
        raise ValueError(
            f"torso normalization needs the 17-joint convention, got {gt.shape[1]} joints"
        )
    a, b = TORSO_DIAGONAL_JOINTS
    return np.linalg.norm(gt[:, a] - gt[:, b], axis=-1)


def bbox_diagonal_lengths(gt) -> np.ndarray:
    """Per-frame diagonal of the ground-truth bounding box (any joint count)."""
    gt = np.asarray(gt, dtype=np.float64)
    extent = gt.max(axis=1) - gt.min(axis=1)
    return np.linalg.norm(extent, axis=-1)


def norm_lengths_for(gt, mode: str = "torso", fixed_length: float | None = None) -> np.ndarray:
    """Normalization lengths per frame: 'torso', 'bbox', or 'fixed'."""
    if mode == "fixed":
        if fixed_length is None or fixed_length <= 0:
            raise ValueError("fixed normalization requires a positive fixed_length")
        return np.full(np.asarray(gt).shape[0], float(fixed_length))
    if mode == "torso":
        return torso_diagonal_lengths(gt)
    if mode == "bbox":
        return bbox_diagonal_lengths(gt)
    raise ValueError(f"unknown normalization mode {mode!r}")
