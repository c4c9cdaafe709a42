"""The optimization loop: Adam over seeded-shuffled batches, per-epoch
evaluation, metric logging, checkpointing, and resumable state."""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch

from ..data.windows import CsiWindow
from ..metrics.report import MetricReport, build_report
from ..model.checkpoint import save_checkpoint
from ..model.config import ModelConfig
from ..model.network import CsiPoseNet, build_model
from .config import TrainConfig, lr_at
from .loss import pose_velocity_loss

log = logging.getLogger(__name__)

METRIC_LOG_NAME = "metrics.jsonl"


def stack_windows(windows: list[CsiWindow]) -> tuple[torch.Tensor, torch.Tensor]:
    """Stack windows into (inputs (N, T, ch, rows, steps), targets (N, T, J, C))."""
    if not windows:
        raise ValueError("empty window list")
    x = torch.from_numpy(np.stack([w.frames for w in windows])).float()
    k = torch.from_numpy(np.stack([w.skeleton.coords for w in windows])).float()
    return x, k


def predict_windows(
    model: CsiPoseNet, windows: list[CsiWindow], batch_size: int = 32
) -> tuple[np.ndarray, np.ndarray | None]:
    """Inference over a window list: (keypoints (N, T, J, C), velocity or None)."""
    x, _ = stack_windows(windows)
    x = x.to(next(model.parameters()).dtype)
    kp_out, vel_out = [], []
    model.eval()
    with torch.no_grad():
        for start in range(0, len(windows), batch_size):
            kp, vel = model(x[start : start + batch_size])
            kp_out.append(kp.numpy())
            if vel is not None:
                vel_out.append(vel.numpy())
    kp = np.concatenate(kp_out)
    vel = np.concatenate(vel_out) if vel_out else None
    return kp, vel


def evaluate_windows(
    model: CsiPoseNet,
    windows: list[CsiWindow],
    batch_size: int = 32,
    norm: str = "torso",
    fixed_length: float | None = None,
) -> MetricReport:
    """Frame-level metric report over all windows."""
    if not windows:
        raise ValueError("empty evaluation set")
    kp, _ = predict_windows(model, windows, batch_size)
    gt = np.stack([w.skeleton.coords for w in windows])
    frames = kp.reshape(-1, kp.shape[2], kp.shape[3])
    gt_frames = gt.reshape(-1, gt.shape[2], gt.shape[3])
    actions = None
    if all(w.action_label is not None for w in windows):
        actions = [w.action_label for w in windows for _ in range(w.length)]
    if norm == "torso" and gt_frames.shape[1] != 17:
        norm = "bbox"  # torso convention needs COCO-17
    return build_report(
        frames,
        gt_frames,
        actions=actions,
        units=windows[0].skeleton.units,
        norm=norm,
        fixed_length=fixed_length,
    )


@dataclass
class EpochRecord:
    epoch: int
    lr: float
    train_loss: float
    metrics: dict[str, float] | None = None

    def to_json(self) -> str:
        row = {"epoch": self.epoch, "lr": self.lr, "train_loss": self.train_loss}
        if self.metrics:
            row.update(self.metrics)
        return json.dumps(row)


@dataclass
class TrainResult:
    model: CsiPoseNet
    history: list[EpochRecord] = field(default_factory=list)
    best_epoch: int = -1
    best_mpjpe: float = float("inf")
    checkpoint_path: Path | None = None
    best_checkpoint_path: Path | None = None


def _metric_summary(report: MetricReport) -> dict[str, float]:
    keys = [f"pck@{a}" for a in report.thresholds] + ["mpjpe", "pa_mpjpe"]
    return {k: report.averages[k] for k in keys}


def train(
    train_windows: list[CsiWindow],
    model_cfg: ModelConfig,
    train_cfg: TrainConfig,
    eval_windows: list[CsiWindow] | None = None,
    out_dir=None,
    max_steps: int | None = None,
    model: CsiPoseNet | None = None,
    norm: str = "torso",
) -> TrainResult:
    """Train with Adam; returns the trained model and per-epoch history.

    Deterministic given the seed: the model is seeded, batches are shuffled
    by a dedicated generator, and data order is single-threaded. Training
    aborts with a diagnostic if the loss stops being finite.
    """
    if not train_windows:
        raise ValueError("cannot train on an empty dataset")
    if model is None:
        model = build_model(model_cfg, seed=train_cfg.seed)
    optimizer = torch.optim.Adam(
        model.parameters(), lr=train_cfg.lr, betas=(0.9, 0.999), eps=1e-8
    )
    return _run(
        model, optimizer, train_windows, train_cfg, eval_windows, out_dir,
        max_steps, start_epoch=0, rng=np.random.default_rng(train_cfg.seed),
        history=None, norm=norm,
    )


def _run(
    model,
    optimizer,
    train_windows,
    train_cfg,
    eval_windows,
    out_dir,
    max_steps,
    start_epoch,
    rng,
    history,
    norm,
) -> TrainResult:
    x, k = stack_windows(train_windows)
    dtype = next(model.parameters()).dtype
    x = x.to(dtype)
    k = k.to(dtype)
    n = x.shape[0]

    out_dir = Path(out_dir) if out_dir is not None else None
    log_path = None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        log_path = out_dir / METRIC_LOG_NAME

    result = TrainResult(model, history=list(history) if history else [])
    for rec in result.history:
        if rec.metrics and rec.metrics.get("mpjpe", float("inf")) < result.best_mpjpe:
            result.best_mpjpe = rec.metrics["mpjpe"]
            result.best_epoch = rec.epoch
    steps_done = 0

    for epoch in range(start_epoch, train_cfg.epochs):
        lr = lr_at(epoch, train_cfg)
        for group in optimizer.param_groups:
            group["lr"] = lr

        model.train()
        perm = rng.permutation(n)
        total = 0.0
        seen = 0
        for start in range(0, n, train_cfg.batch_size_train):
            idx = perm[start : start + train_cfg.batch_size_train]
            batch_x = x[idx]
            batch_k = k[idx]
            optimizer.zero_grad()
            kp, vel = model(batch_x)
            loss = pose_velocity_loss(kp, batch_k, vel, train_cfg.alpha)
            if not torch.isfinite(loss):
                raise RuntimeError(
                    f"training diverged: non-finite loss at epoch {epoch}, "
                    f"step {steps_done} (lr={lr:g})"
                )
            loss.backward()
            if train_cfg.grad_clip is not None:
                torch.nn.utils.clip_grad_norm_(model.parameters(), train_cfg.grad_clip)
            optimizer.step()
            total += loss.item() * len(idx)
            seen += len(idx)
            steps_done += 1
            if max_steps is not None and steps_done >= max_steps:
                break

        record = EpochRecord(epoch, lr, total / seen)
        if eval_windows:
            report = evaluate_windows(
                model, eval_windows, train_cfg.batch_size_eval, norm=norm
            )
            record.metrics = _metric_summary(report)
            if record.metrics["mpjpe"] < result.best_mpjpe:
                result.best_mpjpe = record.metrics["mpjpe"]
                result.best_epoch = epoch
                if out_dir is not None:
                    result.best_checkpoint_path = out_dir / "best.ckpt"
                    save_checkpoint(
                        result.best_checkpoint_path, model, extra={"epoch": epoch}
                    )
        result.history.append(record)
        if log_path is not None:
            with open(log_path, "a", encoding="utf-8") as fh:
                fh.write(record.to_json() + "\n")
        log.info(
            "epoch %d: lr %.2e, train loss %.6f%s",
            epoch,
            lr,
            record.train_loss,
            f", eval mpjpe {record.metrics['mpjpe']:.4f}" if record.metrics else "",
        )
        if out_dir is not None:
            save_train_state(
                out_dir / "train_state.pt", model, optimizer, epoch + 1, rng, result
            )
        if max_steps is not None and steps_done >= max_steps:
            break

    if out_dir is not None:
        result.checkpoint_path = out_dir / "last.ckpt"
        save_checkpoint(result.checkpoint_path, model, extra={"epoch": len(result.history)})
        if result.best_checkpoint_path is None:
            result.best_checkpoint_path = result.checkpoint_path
    return result


def save_train_state(path, model, optimizer, next_epoch, rng, result: TrainResult) -> None:
    """Serialize everything needed to resume the trajectory exactly."""
    torch.save(
        {
            "model_config": model.config.to_dict(),
            "model_state": model.state_dict(),
            "optimizer_state": optimizer.state_dict(),
            "next_epoch": next_epoch,
            "rng_state": rng.bit_generator.state,
            "history": [
                {"epoch": r.epoch, "lr": r.lr, "train_loss": r.train_loss, "metrics": r.metrics}
                for r in result.history
            ],
        },
        path,
    )


def resume(
    state_path,
    train_windows: list[CsiWindow],
    train_cfg: TrainConfig,
    eval_windows: list[CsiWindow] | None = None,
    out_dir=None,
    norm: str = "torso",
) -> TrainResult:
    """Continue training from a saved state; reproduces the uninterrupted run."""
    state = torch.load(state_path, weights_only=False)
    model = CsiPoseNet(ModelConfig.from_dict(state["model_config"]))
    model.load_state_dict(state["model_state"])
    optimizer = torch.optim.Adam(
        model.parameters(), lr=train_cfg.lr, betas=(0.9, 0.999), eps=1e-8
    )
    optimizer.load_state_dict(state["optimizer_state"])
    rng = np.random.default_rng()
    rng.bit_generator.state = state["rng_state"]
    history = [
        EpochRecord(r["epoch"], r["lr"], r["train_loss"], r["metrics"])
        for r in state["history"]
    ]
    return _run(
        model, optimizer, train_windows, train_cfg, eval_windows, out_dir,
        max_steps=None, start_epoch=state["next_epoch"], rng=rng,
        history=history, norm=norm,
    )
