"""The full pose network: frame encoder, backbone, and coordinate heads."""

import torch
from torch import nn

from .backbone import BackboneFeatures, DualStreamBackbone
from .config import ModelConfig


class FrameEncoder(nn.Module):
    """Per-frame CNN producing one embedding per joint.

    Three convolutions (the first followed by 2x2 max pooling); the last has
    one output channel per joint, and each channel's map is flattened and
    projected to the embedding width. Frames are encoded independently.
    """

    def __init__(self, cfg: ModelConfig):
        super().__init__()
        c1, c2 = cfg.conv_channels
        self.cfg = cfg
        self.conv1 = nn.Conv2d(cfg.in_channels, c1, kernel_size=3, padding=1)
        self.pool = nn.MaxPool2d(2)
        self.conv2 = nn.Conv2d(c1, c2, kernel_size=3, padding=1)
        self.conv3 = nn.Conv2d(c2, cfg.num_joints, kernel_size=3, padding=1)
        self.act = nn.GELU()
        flat = (cfg.in_rows // 2) * (cfg.in_steps // 2)
        self.proj = nn.Linear(flat, cfg.embed_dim)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        expected = (self.cfg.in_channels, self.cfg.in_rows, self.cfg.in_steps)
        if x.ndim != 5 or tuple(x.shape[2:]) != expected:
            raise ValueError(
                f"expected input (batch, time, {expected[0]}, {expected[1]}, "
                f"{expected[2]}), got {tuple(x.shape)}"
            )
        b, t = x.shape[:2]
        h = x.reshape(b * t, *expected)
        h = self.pool(self.act(self.conv1(h)))
        h = self.act(self.conv2(h))
        h = self.conv3(h)
        h = h.reshape(b * t, self.cfg.num_joints, -1)
        return self.proj(h).reshape(b, t, self.cfg.num_joints, -1)


class JointMlp(nn.Module):
    """Two-layer head mapping each joint embedding to coordinates."""

    def __init__(self, dim: int, hidden: int, out_dim: int):
        super().__init__()
        self.fc1 = nn.Linear(dim, hidden)
        self.act = nn.GELU()
        self.fc2 = nn.Linear(hidden, out_dim)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.fc2(self.act(self.fc1(x)))


class CsiPoseNet(nn.Module):
    """CSI windows in, keypoint sequences and window velocities out."""

    def __init__(self, cfg: ModelConfig):
        super().__init__()
        self.config = cfg
        self.encoder = FrameEncoder(cfg)
        self.pos_time = nn.Parameter(torch.zeros(cfg.window_len, 1, cfg.embed_dim))
        self.pos_joint = nn.Parameter(torch.zeros(1, cfg.num_joints, cfg.embed_dim))
        self.backbone = DualStreamBackbone(cfg)
        self.keypoint_head = JointMlp(cfg.embed_dim, cfg.decoder_hidden_dim, cfg.coord_dim)
        self.velocity_head = (
            JointMlp(cfg.embed_dim, cfg.decoder_hidden_dim, cfg.coord_dim)
            if cfg.velocity_branch
            else None
        )

    def add_positional(self, encoded: torch.Tensor) -> torch.Tensor:
        """Add the learned time and joint position encodings (broadcast over batch)."""
        if encoded.shape[-3] != self.config.window_len:
            raise ValueError(
                f"expected {self.config.window_len} time steps, got {encoded.shape[-3]}"
            )
        return encoded + self.pos_time + self.pos_joint

    def features(self, x: torch.Tensor) -> dict:
        """Forward pass keeping intermediate features, for diagnostics and tests."""
        squeeze = x.ndim == 4
        if squeeze:
            x = x.unsqueeze(0)
        encoded = self.encoder(x)
        positioned = self.add_positional(encoded)
        backbone: BackboneFeatures = self.backbone(positioned)
        keypoints = self.keypoint_head(backbone.keypoint)
        velocity = (
            self.velocity_head(backbone.velocity[:, -1])
            if self.velocity_head is not None
            else None
        )
        if squeeze:
            keypoints = keypoints.squeeze(0)
            velocity = velocity.squeeze(0) if velocity is not None else None
        return {
            "encoded": encoded,
            "positioned": positioned,
            "last_block": backbone.last,
            "keypoint_feature": backbone.keypoint,
            "velocity_feature": backbone.velocity,
            "fusion_weights": backbone.fusion_weights,
            "keypoints": keypoints,
            "velocity": velocity,
        }

    def forward(self, x: torch.Tensor) -> tuple[torch.Tensor, torch.Tensor | None]:
        """Returns (keypoints (B, T, J, C), velocity (B, J, C) or None).

        A single unbatched window (T, ch, rows, steps) is also accepted and
        yields unbatched outputs.
        """
        out = self.features(x)
        return out["keypoints"], out["velocity"]


def build_model(cfg: ModelConfig, seed: int = 0) -> CsiPoseNet:
    """Construct a seeded model without disturbing the global RNG state."""
    with torch.random.fork_rng():
        torch.manual_seed(seed)
        return CsiPoseNet(cfg)


def parameter_count(model: nn.Module) -> int:
    return sum(p.numel() for p in model.parameters())
