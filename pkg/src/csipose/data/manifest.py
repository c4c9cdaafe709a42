"""On-disk clip datasets.

A dataset directory holds one tensor container per clip track plus a
tab-separated manifest; each manifest line names one clip:

    csi_path<TAB>skeleton_path<TAB>action_label<TAB>subject_id

Paths are stored relative to the manifest. CSI containers are
(frames, channels, rows, steps); skeleton containers are
(frames, joints, coord_dim). An optional ``<skeleton>.conf.bin`` sidecar
stores per-joint confidences.
"""

import logging
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .frames import AlignedSequence
from .skeleton import SkeletonSequence
from .tensorio import read_tensor, write_tensor
from .windows import CsiWindow, slide_windows

log = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.tsv"


@dataclass
class ManifestRow:
    csi_path: Path
    skeleton_path: Path
    action_label: str
    subject_id: str


def write_manifest(path, rows: list[ManifestRow]) -> None:
    path = Path(path)
    base = path.parent.resolve()
    lines = []
    for row in rows:
        csi = os.path.relpath(Path(row.csi_path).resolve(), base)
        skl = os.path.relpath(Path(row.skeleton_path).resolve(), base)
        lines.append(f"{csi}\t{skl}\t{row.action_label}\t{row.subject_id}\n")
    path.write_text("".join(lines), encoding="utf-8")


def read_manifest(path) -> list[ManifestRow]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"manifest not found: {path}")
    rows = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise ValueError(f"malformed manifest line {lineno} in {path}: expected 4 fields")
        rows.append(
            ManifestRow(path.parent / parts[0], path.parent / parts[1], parts[2], parts[3])
        )
    return rows


def _conf_path(skeleton_path: Path) -> Path:
    return skeleton_path.with_suffix(skeleton_path.suffix + ".conf")


@dataclass
class Clip:
    aligned: AlignedSequence
    action_label: str
    subject_id: str
    clip_id: str


def save_clip_dataset(out_dir, clips: list[tuple[AlignedSequence, str, str]]) -> Path:
    """Write clips and their manifest under ``out_dir``; returns the manifest path."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for i, (aligned, action, subject) in enumerate(clips):
        csi_path = out_dir / f"clip{i:04d}.csi.bin"
        skl_path = out_dir / f"clip{i:04d}.skl.bin"
        write_tensor(csi_path, aligned.frames.astype(np.float32))
        write_tensor(skl_path, aligned.skeleton.coords)
        if aligned.skeleton.confidence is not None:
            write_tensor(_conf_path(skl_path), aligned.skeleton.confidence)
        rows.append(ManifestRow(csi_path, skl_path, action, subject))
    manifest = out_dir / MANIFEST_NAME
    write_manifest(manifest, rows)
    return manifest


def load_clips(manifest_path, units: str = "pixels") -> list[Clip]:
    clips = []
    for i, row in enumerate(read_manifest(manifest_path)):
        frames = read_tensor(row.csi_path).astype(np.float64)
        coords = read_tensor(row.skeleton_path).astype(np.float64)
        if frames.ndim != 4:
            raise ValueError(
                f"CSI container {row.csi_path} must be 4-D (frames, ch, rows, steps), "
                f"got shape {frames.shape}"
            )
        if coords.ndim != 3:
            raise ValueError(
                f"skeleton container {row.skeleton_path} must be 3-D "
                f"(frames, joints, dim), got shape {coords.shape}"
            )
        conf_file = _conf_path(Path(row.skeleton_path))
        conf = read_tensor(conf_file).astype(np.float64) if conf_file.exists() else None
        length = min(frames.shape[0], coords.shape[0])
        skeleton = SkeletonSequence(
            coords[:length], conf[:length] if conf is not None else None, units
        )
        clips.append(
            Clip(AlignedSequence(frames[:length], skeleton), row.action_label, row.subject_id, f"clip{i:04d}")
        )
    return clips


def load_windows(
    manifest_path,
    window: int,
    stride: int,
    confidence_min: float = 0.1,
    units: str = "pixels",
) -> list[CsiWindow]:
    """Load every clip and cut sliding windows.

    Windows whose mean label confidence falls below ``confidence_min`` are
    dropped (unlabeled-person frames would poison supervision).
    """
    out = []
    dropped = 0
    for clip in load_clips(manifest_path, units):
        for w in slide_windows(
            clip.aligned,
            window,
            stride,
            action_label=clip.action_label,
            subject_id=clip.subject_id,
            clip_id=clip.clip_id,
        ):
            if w.skeleton.confidence is not None and w.skeleton.confidence.mean() < confidence_min:
                dropped += 1
                continue
            out.append(w)
    if dropped:
        log.info("dropped %d low-confidence windows (< %.2f)", dropped, confidence_min)
    return out
