"""Network hyperparameters and ablation switches."""

from dataclasses import asdict, dataclass, fields


@dataclass(frozen=True)
class ModelConfig:
    window_len: int = 3  # frames per input window
    num_joints: int = 17
    coord_dim: int = 2
    embed_dim: int = 32  # per-joint embedding width
    depth: int = 5  # stacked dual-stream blocks
    num_heads: int = 8
    head_dim: int | None = None  # per-head width of joint attention; embed_dim/num_heads
    mlp_ratio: float = 4.0  # MLP hidden width as a multiple of the token width
    decoder_hidden: int | None = None  # defaults to embed_dim
    in_channels: int = 3
    in_rows: int = 90
    in_steps: int = 5
    conv_channels: tuple[int, int] = (32, 64)
    velocity_branch: bool = True
    velocity_source: str = "ts"  # "ts" | "st" | "ts+st"
    velocity_fusion: bool = True

    def __post_init__(self):
        if self.window_len < 1:
            raise ValueError(f"window_len must be >= 1, got {self.window_len}")
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")
        if self.num_joints < 1:
            raise ValueError(f"num_joints must be >= 1, got {self.num_joints}")
        if self.coord_dim not in (2, 3):
            raise ValueError(f"coord_dim must be 2 or 3, got {self.coord_dim}")
        if self.num_heads < 1:
            raise ValueError(f"num_heads must be >= 1, got {self.num_heads}")
        if self.num_heads * self.spatial_head_dim != self.embed_dim:
            raise ValueError(
                f"num_heads * head_dim must equal embed_dim: "
                f"{self.num_heads} * {self.spatial_head_dim} != {self.embed_dim}"
            )
        if (self.num_joints * self.embed_dim) % self.num_heads != 0:
            raise ValueError(
                f"num_heads ({self.num_heads}) must divide the flattened token width "
                f"{self.num_joints * self.embed_dim}"
            )
        if self.in_rows < 2 or self.in_steps < 2:
            raise ValueError(
                f"input maps must be at least 2x2 for pooling, got "
                f"{self.in_rows}x{self.in_steps}"
            )
        if len(self.conv_channels) != 2 or any(c < 1 for c in self.conv_channels):
            raise ValueError(f"conv_channels must be two positive widths, got {self.conv_channels}")
        if self.velocity_source not in ("ts", "st", "ts+st"):
            raise ValueError(
                f"velocity_source must be 'ts', 'st', or 'ts+st', got {self.velocity_source!r}"
            )
        if self.mlp_ratio <= 0:
            raise ValueError(f"mlp_ratio must be positive, got {self.mlp_ratio}")

    @property
    def spatial_head_dim(self) -> int:
        if self.head_dim is not None:
            return self.head_dim
        if self.embed_dim % self.num_heads != 0:
            raise ValueError(
                f"num_heads ({self.num_heads}) must divide embed_dim ({self.embed_dim})"
            )
        return self.embed_dim // self.num_heads

    @property
    def temporal_head_dim(self) -> int:
        return (self.num_joints * self.embed_dim) // self.num_heads

    @property
    def spatial_mlp_hidden(self) -> int:
        return max(1, int(self.embed_dim * self.mlp_ratio))

    @property
    def temporal_mlp_hidden(self) -> int:
        return max(1, int(self.num_joints * self.embed_dim * self.mlp_ratio))

    @property
    def decoder_hidden_dim(self) -> int:
        return self.decoder_hidden if self.decoder_hidden is not None else self.embed_dim

    @property
    def input_shape(self) -> tuple[int, int, int, int]:
        return (self.window_len, self.in_channels, self.in_rows, self.in_steps)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["conv_channels"] = list(self.conv_channels)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "ModelConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown model config keys: {sorted(unknown)}")
        d = dict(data)
        if "conv_channels" in d:
            d["conv_channels"] = tuple(d["conv_channels"])
        return cls(**d)


def tiny_config(**overrides) -> ModelConfig:
    """A desk-scale configuration for gradient checks and fast regressions."""
    base = dict(
        window_len=3,
        num_joints=4,
        coord_dim=2,
        embed_dim=8,
        depth=1,
        num_heads=2,
        mlp_ratio=2.0,
        in_channels=3,
        in_rows=12,
        in_steps=5,
        conv_channels=(4, 6),
    )
    base.update(overrides)
    return ModelConfig(**base)
