"""Dual-stream spatiotemporal backbone with velocity aggregation.

Each block runs two branches with independent weights: space-first
(joint attention, then time attention) and time-first (the reverse). The
branch outputs are mixed by a learned softmax pair; the time-first branch
additionally feeds a velocity feature that is summed across blocks and
refined by a dedicated temporal block. The refined velocity feature is
late-fused into the final skeleton feature with a fixed 0.5 weight.
"""

from dataclasses import dataclass, field

import torch
from torch import nn

from .config import ModelConfig
from .layers import SpatialBlock, TemporalBlock

VELOCITY_FUSION_WEIGHT = 0.5  # fixed, not learned


@dataclass
class BlockResult:
    fused: torch.Tensor  # (B, T, J, D)
    space_first: torch.Tensor  # (B, T, J, D)
    time_first: torch.Tensor  # (B, T, J, D)
    weights: torch.Tensor  # (B, 2) in float64; rows sum to 1


@dataclass
class BackboneFeatures:
    last: torch.Tensor  # output of the final block, (B, T, J, D)
    keypoint: torch.Tensor  # skeleton feature after late fusion
    velocity: torch.Tensor | None  # refined velocity feature, None if branch disabled
    fusion_weights: list[torch.Tensor] = field(default_factory=list)  # per block, (B, 2)


class DualStreamBlock(nn.Module):
    def __init__(self, cfg: ModelConfig):
        super().__init__()
        self.sf_spatial = SpatialBlock(cfg)
        self.sf_temporal = TemporalBlock(cfg)
        self.tf_temporal = TemporalBlock(cfg)
        self.tf_spatial = SpatialBlock(cfg)
        self.fusion = nn.Linear(2 * cfg.embed_dim, 2)

    def forward(self, x: torch.Tensor) -> BlockResult:
        space_first = self.sf_temporal(self.sf_spatial(x))
        time_first = self.tf_spatial(self.tf_temporal(x))
        pooled = torch.cat([space_first, time_first], dim=-1).mean(dim=(1, 2))
        # The two mixing weights are computed in float64 so they sum to 1 to
        # within rounding of a single division.
        weights = torch.softmax(self.fusion(pooled).double(), dim=-1)
        w = weights.to(x.dtype)
        fused = (
            w[:, 0].view(-1, 1, 1, 1) * space_first
            + w[:, 1].view(-1, 1, 1, 1) * time_first
        )
        return BlockResult(fused, space_first, time_first, weights)


class DualStreamBackbone(nn.Module):
    def __init__(self, cfg: ModelConfig):
        super().__init__()
        self.cfg = cfg
        self.blocks = nn.ModuleList(DualStreamBlock(cfg) for _ in range(cfg.depth))
        self.velocity_temporal = TemporalBlock(cfg) if cfg.velocity_branch else None

    def _velocity_term(self, result: BlockResult) -> torch.Tensor:
        source = self.cfg.velocity_source
        if source == "ts":
            return result.time_first
        if source == "st":
            return result.space_first
        return 0.5 * (result.space_first + result.time_first)

    def forward(self, x: torch.Tensor) -> BackboneFeatures:
        feat = x
        velocity_sum = None
        weights = []
        for block in self.blocks:
            result = block(feat)
            feat = result.fused
            weights.append(result.weights)
            if self.velocity_temporal is not None:
                term = self._velocity_term(result)
                velocity_sum = term if velocity_sum is None else velocity_sum + term

        if self.velocity_temporal is None:
            return BackboneFeatures(feat, feat, None, weights)

        velocity = self.velocity_temporal(velocity_sum)
        if self.cfg.velocity_fusion:
            keypoint = VELOCITY_FUSION_WEIGHT * velocity + feat
        else:
            keypoint = feat
        return BackboneFeatures(feat, keypoint, velocity, weights)
