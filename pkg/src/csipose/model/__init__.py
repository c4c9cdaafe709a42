from .backbone import (
    VELOCITY_FUSION_WEIGHT,
    BackboneFeatures,
    BlockResult,
    DualStreamBackbone,
    DualStreamBlock,
)
from .checkpoint import load_checkpoint, read_checkpoint, save_checkpoint
from .config import ModelConfig, tiny_config
from .layers import AttentionBlock, Mlp, SelfAttention, SpatialBlock, TemporalBlock
from .network import CsiPoseNet, FrameEncoder, JointMlp, build_model, parameter_count
