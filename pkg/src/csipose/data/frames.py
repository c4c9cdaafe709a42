"""CSI frame assembly and video alignment.

A recording samples a 3x3 MIMO link with 30 subcarriers at 150 Hz while a
camera records at 30 Hz, so five consecutive CSI samples form one frame
aligned to one video frame. Each frame is reshaped to (3, 90, 5): transmit
antennas x (receive antenna, subcarrier) x time steps, with the 90-axis
ordered receive-antenna-major (rows 0-29 are rx0's subcarriers, 30-59 rx1,
60-89 rx2).
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..wavelet import WaveletConfig, denoise_streams
from .skeleton import SkeletonSequence

log = logging.getLogger(__name__)

SAMPLES_PER_FRAME = 5
NUM_TX = 3
NUM_RX = 3
NUM_SUBCARRIERS = 30
FRAME_SHAPE = (NUM_TX, NUM_RX * NUM_SUBCARRIERS, SAMPLES_PER_FRAME)


@dataclass
class RawCsiRecording:
    """Amplitude samples of one recording: (num_samples, tx, rx, subcarrier)."""

    amplitudes: np.ndarray
    sample_rate_hz: float = 150.0

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=np.float64)
        if self.amplitudes.ndim != 4 or self.amplitudes.shape[1:] != (NUM_TX, NUM_RX, NUM_SUBCARRIERS):
            raise ValueError(
                f"expected amplitudes of shape (samples, {NUM_TX}, {NUM_RX}, "
                f"{NUM_SUBCARRIERS}), got {self.amplitudes.shape}"
            )
        if not np.isfinite(self.amplitudes).all():
            raise ValueError("recording contains non-finite amplitudes")

    @classmethod
    def from_raw(cls, amplitudes, sample_rate_hz: float = 150.0) -> "RawCsiRecording":
        """Construct from raw capture data, enforcing nonnegative amplitudes."""
        rec = cls(amplitudes, sample_rate_hz)
        if (rec.amplitudes < 0).any():
            raise ValueError("raw amplitudes must be nonnegative")
        return rec

    @property
    def num_samples(self) -> int:
        return self.amplitudes.shape[0]


@dataclass
class CsiFrame:
    """One model-input image (3, 90, 5) paired to one video frame."""

    image: np.ndarray
    frame_index: int

    def __post_init__(self):
        self.image = np.asarray(self.image, dtype=np.float64)
        if self.image.shape != FRAME_SHAPE:
            raise ValueError(f"expected frame of shape {FRAME_SHAPE}, got {self.image.shape}")
        if not np.isfinite(self.image).all():
            raise ValueError("frame contains non-finite values")


def denoise_recording(rec: RawCsiRecording, cfg: WaveletConfig) -> RawCsiRecording:
    """Wavelet-denoise every (tx, rx, subcarrier) stream over the whole recording."""
    amps = rec.amplitudes
    streams = amps.transpose(1, 2, 3, 0).reshape(-1, rec.num_samples)
    cleaned = denoise_streams(streams, cfg)
    cleaned = cleaned.reshape(NUM_TX, NUM_RX, NUM_SUBCARRIERS, rec.num_samples).transpose(3, 0, 1, 2)
    return RawCsiRecording(cleaned, rec.sample_rate_hz)


def assemble_frames(rec: RawCsiRecording) -> list[CsiFrame]:
    """Group every five consecutive samples into one (3, 90, 5) frame.

    Trailing samples that do not fill a frame are discarded.
    """
    if rec.num_samples < SAMPLES_PER_FRAME:
        raise ValueError(
            f"recording has {rec.num_samples} samples; at least {SAMPLES_PER_FRAME} "
            "are needed for one frame"
        )
    count = rec.num_samples // SAMPLES_PER_FRAME
    blocks = rec.amplitudes[: count * SAMPLES_PER_FRAME].reshape(
        count, SAMPLES_PER_FRAME, NUM_TX, NUM_RX, NUM_SUBCARRIERS
    )
    # (samples, tx, rx, sc) -> (tx, rx, sc, samples) -> (tx, rx*sc, samples)
    images = blocks.transpose(0, 2, 3, 4, 1).reshape(count, *FRAME_SHAPE)
    return [CsiFrame(images[i], i) for i in range(count)]


def frame_to_block(image: np.ndarray) -> np.ndarray:
    """Invert the frame reshape back to the (5, 3, 3, 30) sample block."""
    image = np.asarray(image)
    if image.shape != FRAME_SHAPE:
        raise ValueError(f"expected frame of shape {FRAME_SHAPE}, got {image.shape}")
    return image.reshape(NUM_TX, NUM_RX, NUM_SUBCARRIERS, SAMPLES_PER_FRAME).transpose(3, 0, 1, 2)


@dataclass
class AlignedSequence:
    """Index-matched CSI frames and skeletons: one skeleton per frame."""

    frames: np.ndarray  # (length, ch, rows, steps)
    skeleton: SkeletonSequence

    def __len__(self) -> int:
        return self.frames.shape[0]


def align_with_video(
    frames: list[CsiFrame],
    skeleton: SkeletonSequence,
    video_fps: float = 30.0,
    sample_rate_hz: float = 150.0,
) -> AlignedSequence:
    """Pair frames with skeletons by index, truncating to the shorter track."""
    if len(frames) == 0:
        raise ValueError("cannot align an empty frame sequence")
    if skeleton.num_frames == 0:
        raise ValueError("cannot align with an empty skeleton track")
    if sample_rate_hz / video_fps != SAMPLES_PER_FRAME:
        log.warning(
            "sample rate %.1f Hz / video rate %.1f Hz != %d samples per frame; "
            "alignment is by index",
            sample_rate_hz,
            video_fps,
            SAMPLES_PER_FRAME,
        )
    length = min(len(frames), skeleton.num_frames)
    if len(frames) != skeleton.num_frames:
        log.info(
            "truncating to %d pairs (%d frames, %d skeletons)",
            length,
            len(frames),
            skeleton.num_frames,
        )
    images = np.stack([f.image for f in frames[:length]])
    conf = skeleton.confidence[:length] if skeleton.confidence is not None else None
    return AlignedSequence(
        images,
        SkeletonSequence(skeleton.coords[:length], conf, skeleton.units),
    )
