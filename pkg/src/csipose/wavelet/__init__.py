from ._filters import FilterBank, known_families
from .transform import (
    BACKEND,
    CoefficientPyramid,
    WaveletConfig,
    backend,
    denoise,
    denoise_streams,
    dwt_forward,
    dwt_inverse,
)

__all__ = [
    "BACKEND",
    "CoefficientPyramid",
    "FilterBank",
    "WaveletConfig",
    "backend",
    "denoise",
    "denoise_streams",
    "dwt_forward",
    "dwt_inverse",
    "known_families",
]
