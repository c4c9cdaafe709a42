"""Discrete wavelet transform denoising for CSI amplitude streams.

Raw CSI amplitudes carry high-frequency noise on top of the slow variations
caused by body motion. Each (tx, rx, subcarrier) amplitude stream is denoised
independently over the whole recording: decompose with an orthogonal DWT,
shrink the detail coefficients, reconstruct. The approximation band is never
touched.

Defaults: Daubechies-4, 3 levels, soft thresholding with the universal
threshold sigma * sqrt(2 ln n), sigma estimated from the finest detail band
as median(|d|)/0.6745.
"""

import os
from dataclasses import dataclass, field

import numpy as np

from ._filters import FilterBank

if os.environ.get("CSIPOSE_PURE_PY"):
    from . import _py_kernels as _impl

    BACKEND = "numpy"
else:
    try:
        from . import _kernels as _impl

        BACKEND = "compiled"
    except ImportError:
        from . import _py_kernels as _impl

        BACKEND = "numpy"


def backend() -> str:
    """Name of the kernel backend selected at import: 'compiled' or 'numpy'."""
    return BACKEND


@dataclass(frozen=True)
class WaveletConfig:
    family: str = "db4"
    levels: int = 3
    threshold_mode: str = "soft"  # "soft" | "hard"
    threshold_rule: str = "universal"  # "universal" | "fixed"
    threshold_value: float | None = None  # required for rule "fixed"

    def __post_init__(self):
        FilterBank(self.family)  # raises on unknown family
        if self.levels < 1:
            raise ValueError(f"levels must be >= 1, got {self.levels}")
        if self.threshold_mode not in ("soft", "hard"):
            raise ValueError(f"threshold_mode must be 'soft' or 'hard', got {self.threshold_mode!r}")
        if self.threshold_rule not in ("universal", "fixed"):
            raise ValueError(
                f"threshold_rule must be 'universal' or 'fixed', got {self.threshold_rule!r}"
            )
        if self.threshold_rule == "fixed":
            if self.threshold_value is None:
                raise ValueError("threshold_rule 'fixed' requires threshold_value")
            if self.threshold_value < 0:
                raise ValueError(f"fixed threshold must be >= 0, got {self.threshold_value}")


@dataclass
class CoefficientPyramid:
    """Multi-level DWT coefficients of one signal.

    ``details`` is ordered coarse to fine (details[0] belongs to the deepest
    level). ``input_lengths`` records, per detail band in the same order, the
    length of the signal that the corresponding analysis step consumed; the
    inverse transform needs it to crop each reconstruction exactly.
    """

    approximation: np.ndarray
    details: list[np.ndarray] = field(default_factory=list)
    input_lengths: tuple[int, ...] = ()

    @property
    def levels(self) -> int:
        return len(self.details)


def _min_length(levels: int) -> int:
    return 2**levels


def _check_signal(signal) -> np.ndarray:
    x = np.asarray(signal, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"expected a 1-D signal, got shape {x.shape}")
    return x


def dwt_forward(signal, cfg: WaveletConfig) -> CoefficientPyramid:
    """Decompose a 1-D signal into ``cfg.levels`` detail bands plus approximation."""
    x = _check_signal(signal)
    if len(x) < _min_length(cfg.levels):
        raise ValueError(
            f"signal of length {len(x)} is too short for {cfg.levels} levels; "
            f"need at least {_min_length(cfg.levels)} samples"
        )
    bank = FilterBank(cfg.family)
    approx = x[None, :]
    details = []
    lengths = []
    for _ in range(cfg.levels):
        lengths.append(approx.shape[1])
        approx, detail = _impl.analysis(np.ascontiguousarray(approx), bank.dec_lo, bank.dec_hi)
        details.append(detail[0])
    details.reverse()
    lengths.reverse()
    return CoefficientPyramid(approx[0], details, tuple(lengths))


def dwt_inverse(pyramid: CoefficientPyramid, cfg: WaveletConfig) -> np.ndarray:
    """Reconstruct the signal; exact when the coefficients are untouched."""
    if pyramid.levels != cfg.levels:
        raise ValueError(
            f"pyramid has {pyramid.levels} detail bands but config requests {cfg.levels} levels"
        )
    bank = FilterBank(cfg.family)
    approx = np.ascontiguousarray(pyramid.approximation[None, :])
    for detail, out_len in zip(pyramid.details, pyramid.input_lengths):
        if detail.shape != approx[0].shape:
            raise ValueError(
                f"detail band of length {detail.shape[0]} does not match "
                f"approximation of length {approx.shape[1]}"
            )
        rec = _impl.synthesis(
            approx, np.ascontiguousarray(detail[None, :]), bank.rec_lo, bank.rec_hi
        )
        approx = np.ascontiguousarray(rec[:, :out_len])
    return approx[0]


def _shrink(coeffs: np.ndarray, threshold: np.ndarray, mode: str) -> np.ndarray:
    t = np.asarray(threshold)[..., None]
    if mode == "soft":
        return np.sign(coeffs) * np.maximum(np.abs(coeffs) - t, 0.0)
    return np.where(np.abs(coeffs) > t, coeffs, 0.0)


def denoise_streams(streams, cfg: WaveletConfig) -> np.ndarray:
    """Denoise a batch of streams, shape (num_streams, num_samples).

    Thresholds are estimated per stream; only detail bands are shrunk.
    """
    x = np.ascontiguousarray(streams, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"expected (streams, samples), got shape {x.shape}")
    if not np.isfinite(x).all():
        raise ValueError("input contains non-finite samples")
    n = x.shape[1]
    if n < _min_length(cfg.levels):
        raise ValueError(
            f"signal of length {n} is too short for {cfg.levels} levels; "
            f"need at least {_min_length(cfg.levels)} samples"
        )
    bank = FilterBank(cfg.family)

    approx = x
    details = []
    lengths = []
    for _ in range(cfg.levels):
        lengths.append(approx.shape[1])
        approx, detail = _impl.analysis(approx, bank.dec_lo, bank.dec_hi)
        approx = np.ascontiguousarray(approx)
        details.append(detail)

    if cfg.threshold_rule == "fixed":
        threshold = np.full(x.shape[0], float(cfg.threshold_value))
    else:
        sigma = np.median(np.abs(details[-1]), axis=1) / 0.6745
        threshold = sigma * np.sqrt(2.0 * np.log(n))

    for i, detail in enumerate(details):
        details[i] = np.ascontiguousarray(_shrink(detail, threshold, cfg.threshold_mode))

    rec = approx
    for detail, out_len in zip(reversed(details), reversed(lengths)):
        rec = _impl.synthesis(rec, detail, bank.rec_lo, bank.rec_hi)
        rec = np.ascontiguousarray(rec[:, :out_len])
    return rec


def denoise(signal, cfg: WaveletConfig) -> np.ndarray:
    """Denoise one 1-D signal; output has the same length as the input."""
    x = _check_signal(signal)
    return denoise_streams(x[None, :], cfg)[0]
