"""Attention building blocks.

``SpatialBlock`` attends over the joints of each frame independently (the
same weights serve every time step); ``TemporalBlock`` flattens each frame's
joint features into one token and attends over time. Both wrap the attention
and MLP in post-norm residual sublayers.
"""

import torch
from torch import nn

from .config import ModelConfig


class SelfAttention(nn.Module):
    """Multi-head scaled dot-product self-attention with bias-free projections."""

    def __init__(self, dim: int, heads: int):
        super().__init__()
        if dim % heads != 0:
            raise ValueError(f"heads ({heads}) must divide token dim ({dim})")
        self.heads = heads
        self.head_dim = dim // heads
        self.scale = self.head_dim**-0.5
        self.query = nn.Linear(dim, dim, bias=False)
        self.key = nn.Linear(dim, dim, bias=False)
        self.value = nn.Linear(dim, dim, bias=False)
        self.out = nn.Linear(dim, dim, bias=False)

    def _split(self, x: torch.Tensor) -> torch.Tensor:
        b, n, _ = x.shape
        return x.view(b, n, self.heads, self.head_dim).transpose(1, 2)

    def attention_weights(self, x: torch.Tensor) -> torch.Tensor:
        """Softmax attention maps, shape (batch, heads, tokens, tokens)."""
        q = self._split(self.query(x))
        k = self._split(self.key(x))
        return torch.softmax(q @ k.transpose(-2, -1) * self.scale, dim=-1)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        b, n, d = x.shape
        attn = self.attention_weights(x)
        v = self._split(self.value(x))
        out = (attn @ v).transpose(1, 2).reshape(b, n, d)
        return self.out(out)


class Mlp(nn.Module):
    def __init__(self, dim: int, hidden: int):
        super().__init__()
        self.fc1 = nn.Linear(dim, hidden)
        self.act = nn.GELU()
        self.fc2 = nn.Linear(hidden, dim)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.fc2(self.act(self.fc1(x)))


class AttentionBlock(nn.Module):
    """Post-norm transformer block: Add & Norm after attention, then after the MLP."""

    def __init__(self, dim: int, heads: int, mlp_hidden: int):
        super().__init__()
        self.attn = SelfAttention(dim, heads)
        self.norm1 = nn.LayerNorm(dim)
        self.mlp = Mlp(dim, mlp_hidden)
        self.norm2 = nn.LayerNorm(dim)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        x = self.norm1(x + self.attn(x))
        return self.norm2(x + self.mlp(x))


class SpatialBlock(nn.Module):
    """Attention over joints, applied to every time step with shared weights."""

    def __init__(self, cfg: ModelConfig):
        super().__init__()
        self.block = AttentionBlock(cfg.embed_dim, cfg.num_heads, cfg.spatial_mlp_hidden)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        b, t, j, d = x.shape
        out = self.block(x.reshape(b * t, j, d))
        return out.reshape(b, t, j, d)


class TemporalBlock(nn.Module):
    """Attention over time steps; each frame's joints form one flattened token."""

    def __init__(self, cfg: ModelConfig):
        super().__init__()
        dim = cfg.num_joints * cfg.embed_dim
        self.block = AttentionBlock(dim, cfg.num_heads, cfg.temporal_mlp_hidden)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        b, t, j, d = x.shape
        out = self.block(x.reshape(b, t, j * d))
        return out.reshape(b, t, j, d)
