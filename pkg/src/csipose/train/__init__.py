from .config import StepSchedule, TrainConfig, lr_at
from .gradcheck import GradCheckResult, default_sample, grad_check
from .loop import (
    METRIC_LOG_NAME,
    EpochRecord,
    TrainResult,
    evaluate_windows,
    predict_windows,
    resume,
    stack_windows,
    train,
)
from .loss import pose_velocity_loss, velocity_target
