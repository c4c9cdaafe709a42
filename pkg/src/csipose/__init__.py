"""csipose: human pose estimation from WiFi channel state information.

Pipeline: wavelet denoising of raw CSI amplitude streams, frame assembly and
video alignment, sliding-window datasets, a dual-stream spatiotemporal
attention network with velocity modeling, training, and keypoint metrics
(PCK, MPJPE, PA-MPJPE).
"""

__version__ = "0.1.0"
