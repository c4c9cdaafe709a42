"""Procrustes similarity alignment and PA-MPJPE.

The alignment finds the scale, proper rotation, and translation minimizing
||s * P @ R + t - Q||_F (points as rows): center both sets, take the SVD of
the cross-covariance, correct the rotation sign so det(R) = +1, and use the
standard optimal scale.
"""

from dataclasses import dataclass

import numpy as np

from .keypoint import mpjpe


@dataclass
class SimilarityTransform:
    rotation: np.ndarray  # (dim, dim), det +1
    scale: float
    translation: np.ndarray  # (dim,)
    aligned: np.ndarray  # (points, dim), s * P @ R + t

    def apply(self, points: np.ndarray) -> np.ndarray:
        return self.scale * np.asarray(points) @ self.rotation + self.translation


def procrustes_align(P, Q) -> SimilarityTransform:
    """Align point set P onto Q by the least-squares similarity transform."""
    P = np.asarray(P, dtype=np.float64)
    Q = np.asarray(Q, dtype=np.float64)
    if P.shape != Q.shape or P.ndim != 2:
        raise ValueError(f"expected matching (points, dim) sets, got {P.shape} and {Q.shape}")
    n, dim = P.shape
    if n < dim:
        raise ValueError(f"need at least {dim} points for a {dim}-D alignment, got {n}")

    mu_p = P.mean(axis=0)
    mu_q = Q.mean(axis=0)
    P0 = P - mu_p
    Q0 = Q - mu_q
    var_p = (P0**2).sum()
    var_q = (Q0**2).sum()
    if var_q == 0:
        raise ValueError("degenerate target: all points identical")
    if var_p == 0:
        raise ValueError("degenerate source: all points identical")

    u, s, vt = np.linalg.svd(P0.T @ Q0)
    d = np.ones(dim)
    d[-1] = np.sign(np.linalg.det(u @ vt))
    rotation = u @ np.diag(d) @ vt
    scale = float((s * d).sum() / var_p)
    translation = mu_q - scale * mu_p @ rotation
    aligned = scale * P @ rotation + translation
    return SimilarityTransform(rotation, scale, translation, aligned)


def pa_mpjpe(pred, gt) -> float:
    """MPJPE after aligning each predicted frame to its ground-truth frame."""
    pred = np.asarray(pred, dtype=np.float64)
    gt = np.asarray(gt, dtype=np.float64)
    if pred.shape != gt.shape:
        raise ValueError(f"shape mismatch: {pred.shape} vs {gt.shape}")
    if pred.ndim == 2:
        pred = pred[None]
        gt = gt[None]
    aligned = np.stack([procrustes_align(p, q).aligned for p, q in zip(pred, gt)])
    return mpjpe(aligned, gt)
