"""Optimization settings and the learning-rate schedule."""

from dataclasses import asdict, dataclass, fields


@dataclass(frozen=True)
class StepSchedule:
    step_size: int
    gamma: float

    def __post_init__(self):
        if self.step_size < 1:
            raise ValueError(f"step_size must be >= 1, got {self.step_size}")
        if not 0.0 < self.gamma <= 1.0:
            raise ValueError(f"gamma must be in (0, 1], got {self.gamma}")


@dataclass(frozen=True)
class TrainConfig:
    alpha: float = 0.2  # velocity-loss weight
    epochs: int = 100
    batch_size_train: int = 128
    batch_size_eval: int = 32
    lr: float = 1e-4
    scheduler: StepSchedule | None = None
    seed: int = 0
    grad_clip: float | None = None  # max gradient norm; None disables clipping

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.batch_size_train < 1 or self.batch_size_eval < 1:
            raise ValueError("batch sizes must be >= 1")
        if self.lr <= 0:
            raise ValueError(f"lr must be positive, got {self.lr}")
        if self.grad_clip is not None and self.grad_clip <= 0:
            raise ValueError(f"grad_clip must be positive, got {self.grad_clip}")

    @classmethod
    def self_dataset(cls, **overrides) -> "TrainConfig":
        """Profile for the 2D in-home dataset: 100 epochs, constant lr."""
        return cls(**{"epochs": 100, **overrides})

    @classmethod
    def mmfi(cls, **overrides) -> "TrainConfig":
        """Profile for MMFi-style 3D data: 50 epochs with step decay."""
        return cls(**{"epochs": 50, "scheduler": StepSchedule(10, 0.85), **overrides})

    def to_dict(self) -> dict:
        d = asdict(self)
        d["scheduler"] = asdict(self.scheduler) if self.scheduler else None
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "TrainConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown train config keys: {sorted(unknown)}")
        d = dict(data)
        if d.get("scheduler") is not None and not isinstance(d["scheduler"], StepSchedule):
            d["scheduler"] = StepSchedule(**d["scheduler"])
        return cls(**d)


def lr_at(epoch: int, cfg: TrainConfig) -> float:
    """Learning rate for an epoch: lr * gamma^floor(epoch / step_size)."""
    if epoch < 0:
        raise ValueError(f"epoch must be >= 0, got {epoch}")
    if cfg.scheduler is None:
        return cfg.lr
    return cfg.lr * cfg.scheduler.gamma ** (epoch // cfg.scheduler.step_size)
