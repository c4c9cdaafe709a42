"""Command-line entry point.

Commands: synth, preprocess, train, eval, predict, ablate, gradcheck.
Configuration comes from a YAML file plus ``--set section.key=value``
overrides (flag > file > default); every run writes its resolved config,
logs, and outputs into a timestamped directory under the output root
(``--out-root`` or ``$CSIPOSE_OUT_ROOT``, default ``./runs``).
"""

import argparse
import dataclasses
import json
import logging
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from itertools import product
from pathlib import Path

import numpy as np

from .data.frames import RawCsiRecording, align_with_video, assemble_frames, denoise_recording
from .data.manifest import load_clips, load_windows, read_manifest, save_clip_dataset
from .data.skeleton import SkeletonSequence
from .data.splits import SplitSpec, split
from .data.synthetic import generate_clips
from .data.tensorio import read_tensor, write_tensor
from .data.windows import cut_clips, slide_windows
from .metrics.report import format_table, write_report_files
from .model.checkpoint import load_checkpoint
from .model.config import tiny_config
from .runconfig import RunConfig, load_run_config
from .train.gradcheck import grad_check
from .train.loop import evaluate_windows, predict_windows, train
from .wavelet import backend as wavelet_backend

log = logging.getLogger(__name__)

ENV_OUT_ROOT = "CSIPOSE_OUT_ROOT"


def _out_root(args) -> Path:
    return Path(args.out_root or os.environ.get(ENV_OUT_ROOT, "runs"))


def _make_run_dir(args, cfg: RunConfig, command: str) -> Path:
    run_dir = _out_root(args) / f"{command}-{time.strftime('%Y%m%d-%H%M%S')}-{cfg.hash()}"
    run_dir.mkdir(parents=True, exist_ok=True)
    (run_dir / "resolved_config.yaml").write_text(cfg.to_yaml(), encoding="utf-8")
    return run_dir


def _load_config(args) -> RunConfig:
    return load_run_config(args.config, args.set or [])


def _check_geometry(cfg: RunConfig, windows) -> None:
    shape = tuple(windows[0].frames.shape)
    expected = cfg.model.input_shape
    problems = []
    if shape != expected:
        problems.append(
            f"window tensors are {shape} but the model expects {expected} "
            "(window_len, in_channels, in_rows, in_steps)"
        )
    if windows[0].skeleton.num_joints != cfg.model.num_joints:
        problems.append(
            f"data has {windows[0].skeleton.num_joints} joints, model expects "
            f"{cfg.model.num_joints}"
        )
    if windows[0].skeleton.coord_dim != cfg.model.coord_dim:
        problems.append(
            f"data is {windows[0].skeleton.coord_dim}-D, model expects "
            f"{cfg.model.coord_dim}-D"
        )
    if problems:
        hints = "; ".join(problems)
        raise ValueError(f"model config does not match the dataset: {hints}")


def cmd_synth(args) -> int:
    cfg = _load_config(args)
    run_dir = _make_run_dir(args, cfg, "synth")
    out = Path(args.out) if args.out else run_dir / "dataset"
    manifest = save_clip_dataset(out, generate_clips(cfg.synth))
    print(f"wrote {cfg.synth.num_clips} clips to {manifest}")
    return 0


def cmd_preprocess(args) -> int:
    cfg = _load_config(args)
    run_dir = _make_run_dir(args, cfg, "preprocess")
    out = Path(args.out) if args.out else run_dir / "dataset"
    rows = read_manifest(args.manifest)
    processed = []
    total_frames = 0
    for row in rows:
        rec = RawCsiRecording.from_raw(read_tensor(row.csi_path))
        if not args.no_denoise:
            rec = denoise_recording(rec, cfg.wavelet)
        frames = assemble_frames(rec)
        total_frames += len(frames)
        coords = read_tensor(row.skeleton_path)
        conf_file = Path(str(row.skeleton_path) + ".conf")
        conf = read_tensor(conf_file) if conf_file.exists() else None
        skeleton = SkeletonSequence(coords, conf, cfg.dataset.units)
        aligned = align_with_video(frames, skeleton)
        for clip in cut_clips(aligned, cfg.dataset.clip_len):
            processed.append((clip, row.action_label, row.subject_id))
    manifest = save_clip_dataset(out, processed)
    print(
        f"{len(rows)} recordings -> {total_frames} frames -> {len(processed)} clips; "
        f"manifest {manifest} (wavelet backend: {wavelet_backend()})"
    )
    return 0


def _load_dataset(cfg: RunConfig, manifest, window: int | None = None):
    windows = load_windows(
        manifest,
        window if window is not None else cfg.dataset.window,
        cfg.dataset.stride,
        confidence_min=cfg.dataset.confidence_min,
        units=cfg.dataset.units,
    )
    if not windows:
        raise ValueError(f"no windows loaded from {manifest}")
    return windows


def cmd_train(args) -> int:
    cfg = _load_config(args)
    run_dir = _make_run_dir(args, cfg, "train")
    windows = _load_dataset(cfg, args.manifest)
    _check_geometry(cfg, windows)
    train_set, test_set = split(windows, cfg.split)
    result = train(
        train_set,
        cfg.model,
        cfg.train,
        eval_windows=test_set,
        out_dir=run_dir,
        norm=cfg.metrics.norm,
    )
    last = result.history[-1]
    print(f"trained {len(result.history)} epochs on {len(train_set)} windows")
    print(f"final train loss {last.train_loss:.6f}")
    if last.metrics:
        print(f"final eval: {json.dumps(last.metrics)}")
    print(f"best epoch {result.best_epoch} (mpjpe {result.best_mpjpe:.4f})")
    print(f"checkpoints in {run_dir}")
    return 0


def _eval_selection(cfg: RunConfig, windows, side: str):
    if side == "all":
        return windows
    train_set, test_set = split(windows, cfg.split)
    return train_set if side == "train" else test_set


def cmd_eval(args) -> int:
    cfg = _load_config(args)
    run_dir = _make_run_dir(args, cfg, "eval")
    model = load_checkpoint(args.checkpoint)
    windows = _load_dataset(cfg, args.manifest, window=model.config.window_len)
    selected = _eval_selection(cfg, windows, args.split)
    if not selected:
        raise ValueError(f"split side {args.split!r} selected no windows")
    report = evaluate_windows(
        model,
        selected,
        cfg.train.batch_size_eval,
        norm=cfg.metrics.norm,
        fixed_length=cfg.metrics.fixed_length,
    )
    write_report_files(report, run_dir)
    print(format_table(report))
    print(f"report files in {run_dir}")
    return 0


def cmd_predict(args) -> int:
    cfg = _load_config(args)
    run_dir = _make_run_dir(args, cfg, "predict")
    model = load_checkpoint(args.checkpoint)
    windows = _load_dataset(cfg, args.manifest, window=model.config.window_len)
    selected = _eval_selection(cfg, windows, args.split)
    kp, vel = predict_windows(model, selected, cfg.train.batch_size_eval)
    write_tensor(run_dir / "pred_keypoints.bin", kp.astype(np.float32))
    if vel is not None:
        write_tensor(run_dir / "pred_velocity.bin", vel.astype(np.float32))
    gt = np.stack([w.skeleton.coords for w in selected])
    write_tensor(run_dir / "gt_keypoints.bin", gt.astype(np.float32))
    if args.plot:
        from .viz import save_skeleton_plot

        plots = run_dir / "plots"
        plots.mkdir(exist_ok=True)
        for i in range(min(args.plot, len(selected))):
            save_skeleton_plot(
                plots / f"window{i:04d}.png",
                kp[i, -1],
                gt[i, -1],
                selected[i].skeleton.units,
            )
        print(f"wrote {min(args.plot, len(selected))} plots")
    print(f"predictions for {len(selected)} windows in {run_dir}")
    return 0


def cmd_gradcheck(args) -> int:
    cfg = tiny_config() if args.config is None else _load_config(args).model
    result = grad_check(cfg, epsilon=args.epsilon, seed=args.seed)
    print(f"max relative gradient error: {result.max_rel_error:.3e} (epsilon {args.epsilon:g})")
    print(f"worst tensor: {result.worst_tensor()}")
    if result.max_rel_error > args.threshold:
        print(f"FAIL: exceeds threshold {args.threshold:g}", file=sys.stderr)
        return 1
    print(f"PASS: within threshold {args.threshold:g}")
    return 0


_ABLATION_AXES = {
    "window": ("window_len", int),
    "depth": ("depth", int),
    "velocity_branch": ("velocity_branch", None),
    "velocity_source": ("velocity_source", str),
    "velocity_fusion": ("velocity_fusion", None),
}


def _parse_axis(raw: str, caster):
    values = [v.strip() for v in raw.split(",") if v.strip()]
    if caster is None:  # boolean axes accept on/off
        return [v.lower() in ("on", "true", "1", "yes") for v in values]
    return [caster(v) for v in values]


def _run_cell(cell: dict, cfg_dict: dict, manifest: str) -> dict:
    cfg = RunConfig.from_dict(cfg_dict)
    model_cfg = dataclasses.replace(cfg.model, **{k: v for k, v in cell.items()})
    windows = load_windows(
        manifest,
        model_cfg.window_len,
        cfg.dataset.stride,
        confidence_min=cfg.dataset.confidence_min,
        units=cfg.dataset.units,
    )
    train_set, test_set = split(windows, cfg.split)
    result = train(train_set, model_cfg, cfg.train, norm=cfg.metrics.norm)
    report = evaluate_windows(
        result.model, test_set, cfg.train.batch_size_eval, norm=cfg.metrics.norm
    )
    row = dict(cell)
    for key in ("pck@50", "pck@20", "mpjpe", "pa_mpjpe"):
        row[key] = round(report.averages[key], 4)
    return row


def cmd_ablate(args) -> int:
    cfg = _load_config(args)
    run_dir = _make_run_dir(args, cfg, "ablate")
    axes = {}
    for name, (field_name, caster) in _ABLATION_AXES.items():
        raw = getattr(args, name)
        if raw is not None:
            values = _parse_axis(raw, caster)
            if not values:
                raise ValueError(f"ablation axis {name!r} is empty")
            axes[field_name] = values
    if not axes:
        raise ValueError("empty ablation grid: provide at least one axis")

    names = list(axes)
    cells = [dict(zip(names, combo)) for combo in product(*(axes[n] for n in names))]
    print(f"ablation grid: {len(cells)} cells over {names}")

    rows = []
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [
                pool.submit(_run_cell, cell, cfg.to_dict(), str(args.manifest))
                for cell in cells
            ]
            for cell, future in zip(cells, futures):
                try:
                    rows.append(future.result())
                except Exception as exc:  # keep the grid going
                    rows.append({**cell, "error": str(exc)})
    else:
        for cell in cells:
            try:
                rows.append(_run_cell(cell, cfg.to_dict(), str(args.manifest)))
            except Exception as exc:
                rows.append({**cell, "error": str(exc)})

    columns = names + ["pck@50", "pck@20", "mpjpe", "pa_mpjpe", "error"]
    lines = ["\t".join(columns)]
    for row in rows:
        lines.append("\t".join(str(row.get(c, "")) for c in columns))
    table = "\n".join(lines)
    (run_dir / "ablation.tsv").write_text(table + "\n", encoding="utf-8")
    print(table)
    print(f"ablation table in {run_dir}")
    failed = sum("error" in r for r in rows)
    return 1 if failed == len(rows) else 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="YAML run configuration file")
    parser.add_argument(
        "--set",
        action="append",
        metavar="SECTION.KEY=VALUE",
        help="override a config value (repeatable)",
    )
    parser.add_argument("--out-root", help=f"output root (default ${ENV_OUT_ROOT} or ./runs)")
    parser.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="csipose",
        description="WiFi CSI human pose estimation pipeline",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic clip dataset")
    p.add_argument("--out", help="dataset directory (default inside the run dir)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("preprocess", help="denoise, frame, align, and clip raw recordings")
    p.add_argument("--manifest", required=True, help="manifest of raw recordings")
    p.add_argument("--out", help="processed dataset directory")
    p.add_argument("--no-denoise", action="store_true", help="skip wavelet denoising")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("train", help="train on a processed dataset")
    p.add_argument("--manifest", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a checkpoint")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--split", choices=("all", "train", "test"), default="test")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("predict", help="write predictions for a dataset")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--split", choices=("all", "train", "test"), default="all")
    p.add_argument("--plot", type=int, default=0, metavar="N", help="plot first N windows")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("ablate", help="train/eval over a grid of ablation settings")
    p.add_argument("--manifest", required=True)
    p.add_argument("--window", help="comma-separated window lengths, e.g. 3,5,7")
    p.add_argument("--depth", help="comma-separated block depths, e.g. 1,3,5")
    p.add_argument("--velocity-branch", dest="velocity_branch", help="on,off")
    p.add_argument("--velocity-source", dest="velocity_source", help="ts,st,ts+st")
    p.add_argument("--velocity-fusion", dest="velocity_fusion", help="on,off")
    p.add_argument("--jobs", type=int, default=1, help="parallel grid cells")
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("gradcheck", help="verify analytic gradients against finite differences")
    p.add_argument("--epsilon", type=float, default=1e-4)
    p.add_argument("--threshold", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gradcheck)

    for sp in sub.choices.values():
        _add_common(sp)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
