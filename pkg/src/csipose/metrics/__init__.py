from .keypoint import (
    bbox_diagonal_lengths,
    joint_distances,
    mpjpe,
    norm_lengths_for,
    pck,
    per_joint_mpjpe,
    torso_diagonal_lengths,
)
from .procrustes import SimilarityTransform, pa_mpjpe, procrustes_align
from .report import (
    DEFAULT_THRESHOLDS,
    MetricReport,
    build_report,
    format_table,
    write_report_files,
)
