"""Skeleton sequences and keypoint conventions.

Ground truth follows the 17-joint COCO convention. 2D labels extracted with
OpenPose arrive in the 25-joint BODY_25 layout and are reduced to COCO-17.
"""

from dataclasses import dataclass, field

import numpy as np

COCO17_JOINT_NAMES = (
    "Nose",
    "L.Eye",
    "R.Eye",
    "L.Ear",
    "R.Ear",
    "L.Shoulder",
    "R.Shoulder",
    "L.Elbow",
    "R.Elbow",
    "L.Wrist",
    "R.Wrist",
    "L.Hip",
    "R.Hip",
    "L.Knee",
    "R.Knee",
    "L.Ankle",
    "R.Ankle",
)

# OpenPose BODY_25 index of each COCO-17 joint, in the order above.
BODY25_TO_COCO17 = (0, 16, 15, 18, 17, 5, 2, 6, 3, 7, 4, 12, 9, 13, 10, 14, 11)

# Joints used for the torso-diagonal PCK normalization length.
TORSO_DIAGONAL_JOINTS = (
    COCO17_JOINT_NAMES.index("L.Shoulder"),
    COCO17_JOINT_NAMES.index("R.Hip"),
)

# Limb segments for plotting COCO-17 skeletons.
COCO17_LIMBS = (
    (0, 1), (0, 2), (1, 3), (2, 4),
    (5, 6), (5, 7), (7, 9), (6, 8), (8, 10),
    (5, 11), (6, 12), (11, 12),
    (11, 13), (13, 15), (12, 14), (14, 16),
)


@dataclass
class SkeletonSequence:
    """Joint coordinates over time: (frames, joints, coord_dim).

    Units are pixels for 2D data and millimeters for 3D data. The optional
    confidence channel comes from the label extractor and is kept for
    filtering, never for supervision.
    """

    coords: np.ndarray
    confidence: np.ndarray | None = None
    units: str = "pixels"

    def __post_init__(self):
        self.coords = np.asarray(self.coords, dtype=np.float64)
        if self.coords.ndim != 3:
            raise ValueError(f"coords must be (frames, joints, dim), got shape {self.coords.shape}")
        if self.coords.shape[2] not in (2, 3):
            raise ValueError(f"coordinate dim must be 2 or 3, got {self.coords.shape[2]}")
        if not np.isfinite(self.coords).all():
            raise ValueError("skeleton coordinates contain non-finite values")
        if self.confidence is not None:
            self.confidence = np.asarray(self.confidence, dtype=np.float64)
            if self.confidence.shape != self.coords.shape[:2]:
                raise ValueError(
                    f"confidence shape {self.confidence.shape} does not match "
                    f"coords {self.coords.shape[:2]}"
                )

    @property
    def num_frames(self) -> int:
        return self.coords.shape[0]

    @property
    def num_joints(self) -> int:
        return self.coords.shape[1]

    @property
    def coord_dim(self) -> int:
        return self.coords.shape[2]


def select_coco17(body25: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Reduce one OpenPose BODY_25 frame (25 x 3 of x, y, confidence) to COCO-17.

    Returns (coords (17, 2), confidence (17,)).
    """
    body25 = np.asarray(body25, dtype=np.float64)
    if body25.shape != (25, 3):
        raise ValueError(f"expected BODY_25 keypoints of shape (25, 3), got {body25.shape}")
    idx = list(BODY25_TO_COCO17)
    return body25[idx, :2].copy(), body25[idx, 2].copy()
