"""
Shipped network profiles. Every profile is a plain NetworkConfig; run configs
select one with `profile = "<name>"` and may override any field.
"""
from typing import Callable, Dict

from app.models.class_request_model.config_models import BatchSpec, CustomSkeletonDefinition, JsflConfig, NetworkConfig
from app.utils.error_messages import ConfigErrorMessages
from app.utils.exceptions import ConfigError
from app.utils.model_variant_enum import SkeletonName

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
error_logger = LoggerFactory.get_error_logger()

def casia_b_profile() -> NetworkConfig:
    return NetworkConfig(
        profile="casia-b",
        skeleton=SkeletonName.COCO17,
        frames=60,
        embedding_channels=64,
        block_channels=[128, 128, 256, 256],
        block_strides=[1, 2, 2, 1],
        head_channels=256,
        view_count=11,
        jsfl=JsflConfig(pooled_length=15, reduction_ratio=8, inflation_ratio=2, spatial_kernels=3, temporal_kernel=9),
    )

def ou_mvlp_profile() -> NetworkConfig:
    return NetworkConfig(
        profile="ou-mvlp",
        skeleton=SkeletonName.BODY18,
        frames=32,
        embedding_channels=128,
        block_channels=[256, 256, 512, 512],
        block_strides=[1, 2, 2, 1],
        head_channels=512,
        view_count=14,
        # block 4 sees 8 frames
        jsfl=JsflConfig(pooled_length=8, reduction_ratio=8, inflation_ratio=2, spatial_kernels=3, temporal_kernel=9),
    )

def desk_profile() -> NetworkConfig:
    return NetworkConfig(
        profile="desk",
        skeleton=SkeletonName.COCO17,
        frames=30,
        embedding_channels=16,
        block_channels=[32, 32, 64, 64],
        block_strides=[1, 2, 2, 1],
        head_channels=64,
        view_count=11,
        jsfl=JsflConfig(pooled_length=6, reduction_ratio=8, inflation_ratio=2, spatial_kernels=3, temporal_kernel=9),
    )

def tiny_profile() -> NetworkConfig:
    """
    Five-joint chain, eight frames, widths 4/8. Used by the gradient checks.
    """
    return NetworkConfig(
        profile="tiny",
        skeleton=SkeletonName.CUSTOM,
        custom_skeleton=CustomSkeletonDefinition(joint_count=5, edges=[(0, 1), (1, 2), (2, 3), (3, 4)], root=2),
        frames=8,
        embedding_channels=4,
        block_channels=[8, 8, 8, 8],
        block_strides=[1, 2, 2, 1],
        head_channels=8,
        view_count=3,
        temporal_kernel=3,
        vatl_embedding_channels=4,
        vatl_temporal_kernel=3,
        jsfl=JsflConfig(pooled_length=2, reduction_ratio=2, inflation_ratio=2, spatial_kernels=3, temporal_kernel=3),
    )

NETWORK_PROFILES: Dict[str, Callable[[], NetworkConfig]] = {
    "casia-b": casia_b_profile,
    "ou-mvlp": ou_mvlp_profile,
    "desk": desk_profile,
    "tiny": tiny_profile,
}

PROFILE_BATCHES: Dict[str, BatchSpec] = {
    "casia-b": BatchSpec(p=8, k=16),
    "ou-mvlp": BatchSpec(p=32, k=12),
    "desk": BatchSpec(p=8, k=4),
}

def get_network_profile(name: str) -> NetworkConfig:
    if name not in NETWORK_PROFILES:
        message = ConfigErrorMessages.UNKNOWN_PROFILE.value.format(name, sorted(NETWORK_PROFILES))
        error_logger.error(f"get_network_profile | {message}")
        raise ConfigError(message)
    return NETWORK_PROFILES[name]()
