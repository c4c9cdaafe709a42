"""Training objective: weighted keypoint and velocity regression.

Both terms are element-mean squared errors, so the balance between them does
not depend on window length, joint count, or coordinate dim. The velocity
target is recomputed from the keypoint ground truth (last frame minus first)
rather than trusting a stored field.
"""

import torch


def velocity_target(kp_gt: torch.Tensor) -> torch.Tensor:
    """Displacement between the last and first frames: (B, J, C)."""
    return kp_gt[:, -1] - kp_gt[:, 0]


def pose_velocity_loss(
    kp_pred: torch.Tensor,
    kp_gt: torch.Tensor,
    vel_pred: torch.Tensor | None,
    alpha: float = 0.2,
) -> torch.Tensor:
    """alpha * mse(velocity) + (1 - alpha) * mse(keypoints).

    Accepts batched (B, T, J, C) or single-window (T, J, C) tensors. With no
    velocity prediction (velocity branch disabled) the loss is the plain
    keypoint mean squared error.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    if kp_pred.ndim == 3:
        kp_pred = kp_pred.unsqueeze(0)
        kp_gt = kp_gt.unsqueeze(0)
        if vel_pred is not None:
            vel_pred = vel_pred.unsqueeze(0)
    if kp_pred.shape != kp_gt.shape or kp_pred.ndim != 4:
        raise ValueError(
            f"expected matching (batch, time, joints, dim) tensors, got "
            f"{tuple(kp_pred.shape)} and {tuple(kp_gt.shape)}"
        )
    for name, tensor in (("kp_pred", kp_pred), ("kp_gt", kp_gt), ("vel_pred", vel_pred)):
        if tensor is not None and not torch.isfinite(tensor).all():
            raise ValueError(f"{name} contains non-finite values")

    keypoint_term = ((kp_pred - kp_gt) ** 2).mean()
    if vel_pred is None:
        return keypoint_term
    vel_gt = velocity_target(kp_gt)
    if vel_pred.shape != vel_gt.shape:
        raise ValueError(
            f"velocity prediction shape {tuple(vel_pred.shape)} does not match "
            f"target {tuple(vel_gt.shape)}"
        )
    velocity_term = ((vel_pred - vel_gt) ** 2).mean()
    return alpha * velocity_term + (1.0 - alpha) * keypoint_term
