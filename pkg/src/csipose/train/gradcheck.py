"""Gradient verification: analytic backprop vs central finite differences.

Runs the full loss-through-network composition in float64 and perturbs every
parameter coordinate (coordinates are subsampled only for tensors above the
exhaustive limit). The finite-difference quotient is the oracle; agreement is
reported as the max relative error over all tensors.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import torch

from ..data.synthetic import SynthConfig, generate_windows
from ..model.config import ModelConfig, tiny_config
from ..model.network import build_model
from .loop import stack_windows
from .loss import pose_velocity_loss

EXHAUSTIVE_LIMIT = 10_000  # tensors up to this size are checked coordinate by coordinate
SAMPLED_COORDS = 1024


@dataclass
class GradCheckResult:
    max_rel_error: float
    per_tensor: dict[str, float]
    epsilon: float

    def worst_tensor(self) -> str:
        return max(self.per_tensor, key=self.per_tensor.get)


def default_sample(cfg: ModelConfig, batch: int = 2, seed: int = 0):
    """A small synthetic batch matching the model's input geometry."""
    synth = SynthConfig(
        num_clips=1,
        clip_len=cfg.window_len + batch,
        window=cfg.window_len,
        stride=1,
        joints=cfg.num_joints,
        coord_dim=cfg.coord_dim,
        noise_sigma=0.05,
        seed=seed,
        channels=cfg.in_channels,
        rows=cfg.in_rows,
        steps=cfg.in_steps,
    )
    windows = generate_windows(synth)[:batch]
    x, k = stack_windows(windows)
    return x.double(), k.double()


def grad_check(
    cfg: ModelConfig | None = None,
    sample: tuple[torch.Tensor, torch.Tensor] | None = None,
    epsilon: float = 1e-4,
    alpha: float = 0.2,
    seed: int = 0,
    exhaustive_limit: int = EXHAUSTIVE_LIMIT,
    sampled_coords: int = SAMPLED_COORDS,
) -> GradCheckResult:
    if cfg is None:
        cfg = tiny_config()
    if sample is None:
        sample = default_sample(cfg, seed=seed)
    x, kp_gt = sample

    model = build_model(cfg, seed=seed).double()

    # Tiny tensors: a single thread and a traced graph cut dispatch overhead,
    # which dominates the tens of thousands of forward evaluations.
    old_threads = torch.get_num_threads()
    torch.set_num_threads(1)
    try:
        forward = model
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                forward = torch.jit.trace(model, x, check_trace=False)
        except Exception:  # models without a velocity head are not traceable
            forward = model

        def loss_value() -> float:
            with torch.no_grad():
                kp, vel = forward(x)
                return pose_velocity_loss(kp, kp_gt, vel, alpha).item()

        model.zero_grad()
        kp, vel = model(x)
        pose_velocity_loss(kp, kp_gt, vel, alpha).backward()

        rng = np.random.default_rng(seed)
        per_tensor: dict[str, float] = {}
        for name, param in model.named_parameters():
            grad = param.grad
            analytic = (grad if grad is not None else torch.zeros_like(param)).reshape(-1)
            flat = param.data.reshape(-1)
            numel = flat.numel()
            if numel <= exhaustive_limit:
                coords = range(numel)
            else:
                coords = rng.choice(numel, size=min(sampled_coords, numel), replace=False)
            worst = 0.0
            for i in coords:
                original = flat[i].item()
                flat[i] = original + epsilon
                plus = loss_value()
                flat[i] = original - epsilon
                minus = loss_value()
                flat[i] = original
                numeric = (plus - minus) / (2.0 * epsilon)
                a = analytic[i].item()
                rel = abs(a - numeric) / max(abs(a), abs(numeric), 1e-6)
                worst = max(worst, rel)
            per_tensor[name] = worst
    finally:
        torch.set_num_threads(old_threads)

    return GradCheckResult(max(per_tensor.values()), per_tensor, epsilon)
