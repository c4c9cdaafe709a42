"""Per-joint, per-action, and summary metric reports."""

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from ..data.skeleton import COCO17_JOINT_NAMES
from .keypoint import norm_lengths_for, pck, per_joint_mpjpe
from .procrustes import pa_mpjpe

DEFAULT_THRESHOLDS = (50, 40, 30, 20, 10)
PER_ACTION_THRESHOLD = 20


@dataclass
class MetricReport:
    per_joint: dict[str, dict[str, float]]
    per_action: dict[str, float]  # PCK@20 by action
    averages: dict[str, float]
    units: str = "pixels"
    num_frames: int = 0
    thresholds: tuple[int, ...] = DEFAULT_THRESHOLDS

    def to_dict(self) -> dict:
        return asdict(self)


def _joint_names(num_joints: int, joint_names=None) -> list[str]:
    if joint_names is not None:
        if len(joint_names) != num_joints:
            raise ValueError(f"{len(joint_names)} names for {num_joints} joints")
        return list(joint_names)
    if num_joints == len(COCO17_JOINT_NAMES):
        return list(COCO17_JOINT_NAMES)
    return [f"joint{i}" for i in range(num_joints)]


def build_report(
    pred,
    gt,
    actions=None,
    units: str = "pixels",
    thresholds=DEFAULT_THRESHOLDS,
    norm: str = "torso",
    fixed_length: float | None = None,
    joint_names=None,
) -> MetricReport:
    """Evaluate predictions frame by frame.

    ``pred``/``gt`` are (frames, joints, dim); ``actions`` optionally labels
    each frame for the per-action PCK@20 breakdown. Averages are the
    unweighted means of the per-joint rows.
    """
    pred = np.asarray(pred, dtype=np.float64)
    gt = np.asarray(gt, dtype=np.float64)
    if pred.ndim != 3 or pred.shape != gt.shape:
        raise ValueError(f"expected matching (frames, joints, dim), got {pred.shape} and {gt.shape}")
    if pred.shape[0] == 0:
        raise ValueError("cannot evaluate an empty set")
    names = _joint_names(pred.shape[1], joint_names)
    lengths = norm_lengths_for(gt, norm, fixed_length)

    per_joint: dict[str, dict[str, float]] = {name: {} for name in names}
    averages: dict[str, float] = {}
    for alpha in thresholds:
        per_joint_pck, avg = pck(pred, gt, alpha, lengths)
        for name, value in zip(names, per_joint_pck):
            per_joint[name][f"pck@{alpha}"] = float(value)
        averages[f"pck@{alpha}"] = avg
    joint_errors = per_joint_mpjpe(pred, gt)
    for name, value in zip(names, joint_errors):
        per_joint[name]["mpjpe"] = float(value)
    averages["mpjpe"] = float(joint_errors.mean())
    averages["pa_mpjpe"] = pa_mpjpe(pred, gt)

    per_action: dict[str, float] = {}
    if actions is not None:
        actions = list(actions)
        if len(actions) != pred.shape[0]:
            raise ValueError(f"{len(actions)} action labels for {pred.shape[0]} frames")
        for action in dict.fromkeys(actions):
            mask = np.array([a == action for a in actions])
            _, avg = pck(pred[mask], gt[mask], PER_ACTION_THRESHOLD, lengths[mask])
            per_action[action] = avg

    return MetricReport(
        per_joint,
        per_action,
        averages,
        units=units,
        num_frames=pred.shape[0],
        thresholds=tuple(thresholds),
    )


def format_table(report: MetricReport) -> str:
    """Render the per-joint table with the average row, like the usual papers."""
    cols = [f"PCK@{a}" for a in report.thresholds] + [f"MPJPE ({report.units})"]
    width = max(len(n) for n in report.per_joint) + 2
    lines = ["Keypoint".ljust(width) + "".join(c.rjust(14) for c in cols)]
    for name, row in report.per_joint.items():
        cells = [row[f"pck@{a}"] for a in report.thresholds] + [row["mpjpe"]]
        lines.append(name.ljust(width) + "".join(f"{v:14.2f}" for v in cells))
    avg = [report.averages[f"pck@{a}"] for a in report.thresholds] + [report.averages["mpjpe"]]
    lines.append("Average".ljust(width) + "".join(f"{v:14.2f}" for v in avg))
    lines.append(f"PA-MPJPE ({report.units}): {report.averages['pa_mpjpe']:.4f}")
    return "\n".join(lines)


def write_report_files(report: MetricReport, out_dir) -> None:
    """Write table.txt, report.json, and the per-action bar-chart data."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "table.txt").write_text(format_table(report) + "\n", encoding="utf-8")
    (out_dir / "report.json").write_text(
        json.dumps(report.to_dict(), indent=2) + "\n", encoding="utf-8"
    )
    if report.per_action:
        lines = [f"{action}\t{value:.4f}\n" for action, value in report.per_action.items()]
        (out_dir / "per_action.tsv").write_text("".join(lines), encoding="utf-8")
