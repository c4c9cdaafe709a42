from .frames import (
    FRAME_SHAPE,
    NUM_RX,
    NUM_SUBCARRIERS,
    NUM_TX,
    SAMPLES_PER_FRAME,
    AlignedSequence,
    CsiFrame,
    RawCsiRecording,
    align_with_video,
    assemble_frames,
    denoise_recording,
    frame_to_block,
)
from .manifest import (
    MANIFEST_NAME,
    Clip,
    ManifestRow,
    load_clips,
    load_windows,
    read_manifest,
    save_clip_dataset,
    write_manifest,
)
from .mmfi import MmfiProtocol, load_mmfi_style, mmfi_split
from .skeleton import (
    BODY25_TO_COCO17,
    COCO17_JOINT_NAMES,
    COCO17_LIMBS,
    TORSO_DIAGONAL_JOINTS,
    SkeletonSequence,
    select_coco17,
)
from .splits import SplitSpec, split
from .synthetic import SynthConfig, generate_clips, generate_windows
from .tensorio import read_tensor, write_tensor
from .windows import CsiWindow, cut_clips, slide_windows, window_count
