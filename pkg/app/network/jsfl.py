"""
Joint-specific filter learning.

From the block input pooled to T_P frames, two branches generate per-sequence,
per-joint depthwise filters:

  spatial  : depthwise TC(k=3) -> temporal mean -> FC(C, C/r) + BN + ReLU
             -> FC(C/r, K_S*C) -> reshape (K_S, N, C) -> BN       => F_S
  temporal : dense TC(k=3, C -> C') -> FC over time (T_P -> alpha*T_P) + ReLU
             -> FC over time (alpha*T_P -> K_T) -> BN              => F_T

Every weight is shared across joints, so the generators are equivariant under a
permutation of the joints.
"""
import numpy as np

from app.engine import nn_ops
from app.engine import primitives as P
from app.engine.layers import BatchNorm, DepthwiseTemporalConv, Linear, TemporalConv
from app.engine.module import Module, Parameter
from app.engine.primitives import fail
from app.engine.tensor import Tensor, as_tensor
from app.models.class_request_model.config_models import JsflConfig
from app.models.domain_models.domain_models import GeneratedFilters
from app.utils.error_messages import NetworkErrorMessages
from app.utils.exceptions import InvalidArgumentError, ShapeMismatchError
from app.utils.model_variant_enum import FilterMode

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

CONTEXT_KERNEL = 3

def _time_last(x: Tensor) -> Tensor:
    lead = list(range(x.ndim - 3))
    return P.transpose(x, lead + [x.ndim - 2, x.ndim - 1, x.ndim - 3])

def _time_third_last(x: Tensor) -> Tensor:
    lead = list(range(x.ndim - 3))
    return P.transpose(x, lead + [x.ndim - 1, x.ndim - 3, x.ndim - 2])

class SpatialFilterGenerator(Module):
    def __init__(self, channels: int, spatial_kernels: int, reduction_ratio: int, rng: np.random.Generator):
        super().__init__()
        if channels % reduction_ratio:
            fail(InvalidArgumentError, NetworkErrorMessages.RATIO_MISMATCH.value.format(channels, reduction_ratio))
        reduced = channels // reduction_ratio
        self.channels = channels
        self.spatial_kernels = spatial_kernels
        self.context = DepthwiseTemporalConv(channels, CONTEXT_KERNEL, rng)
        self.reduce = Linear(channels, reduced, rng)
        self.reduce_norm = BatchNorm((reduced,), channel_axes=(-1,))
        self.expand = Linear(reduced, spatial_kernels * channels, rng)
        # one channel per (k, c); statistics over batch and joints
        self.filter_norm = BatchNorm((spatial_kernels, channels), channel_axes=(-3, -1))

    def forward(self, x_p) -> Tensor:
        x_p = as_tensor(x_p)
        if x_p.shape[-1] != self.channels:
            fail(ShapeMismatchError, NetworkErrorMessages.INPUT_CHANNEL_MISMATCH.value.format("JSFL spatial branch", x_p.shape[-1], self.channels))
        summary = nn_ops.temporal_mean(self.context(x_p))
        hidden = nn_ops.relu(self.reduce_norm(self.reduce(summary)))
        flat = self.expand(hidden)
        lead, joints = flat.shape[:-2], flat.shape[-2]
        filters = P.reshape(flat, lead + (joints, self.spatial_kernels, self.channels))
        filters = P.swapaxes(filters, -3, -2)
        return self.filter_norm(filters)

class TemporalFilterGenerator(Module):
    def __init__(
        self,
        in_channels: int,
        out_channels: int,
        pooled_length: int,
        inflation_ratio: int,
        temporal_kernel: int,
        rng: np.random.Generator,
    ):
        super().__init__()
        self.in_channels = in_channels
        self.pooled_length = pooled_length
        self.context = TemporalConv(in_channels, out_channels, CONTEXT_KERNEL, rng)
        self.inflate = Linear(pooled_length, inflation_ratio * pooled_length, rng)
        self.shrink = Linear(inflation_ratio * pooled_length, temporal_kernel, rng)
        self.filter_norm = BatchNorm((out_channels,), channel_axes=(-1,))

    def forward(self, x_p) -> Tensor:
        x_p = as_tensor(x_p)
        if x_p.shape[-1] != self.in_channels:
            fail(ShapeMismatchError, NetworkErrorMessages.INPUT_CHANNEL_MISMATCH.value.format("JSFL temporal branch", x_p.shape[-1], self.in_channels))
        if x_p.shape[-3] != self.pooled_length:
            fail(ShapeMismatchError, NetworkErrorMessages.FRAME_MISMATCH.value.format("JSFL temporal branch", x_p.shape[-3], self.pooled_length))
        lifted = _time_last(self.context(x_p))
        taps = self.shrink(nn_ops.relu(self.inflate(lifted)))
        return self.filter_norm(_time_third_last(taps))

def generate_spatial_filters(x_p, generator: SpatialFilterGenerator) -> Tensor:
    """
    (.., T_P, N, C) -> F_S of shape (.., K_S, N, C).
    """
    return generator(x_p)

def generate_temporal_filters(x_p, generator: TemporalFilterGenerator) -> Tensor:
    """
    (.., T_P, N, C) -> F_T of shape (.., K_T, N, C').
    """
    return generator(x_p)

class JointSpecificFilterLearning(Module):
    """
    Filter source of one CAG block.

    adaptive: filters generated per sequence and per joint.
    global:   the generators see the joint-averaged input, so one filter set is
              broadcast over every joint (joint axis of length 1).
    static:   learned per-joint filters shared by every sequence; no generator.
    """
    def __init__(
        self,
        in_channels: int,
        out_channels: int,
        joint_count: int,
        config: JsflConfig,
        rng: np.random.Generator,
    ):
        super().__init__()
        self.mode = FilterMode(config.filter_mode)
        self.pooled_length = config.pooled_length
        if self.mode is FilterMode.STATIC:
            self.static_spatial = Parameter(np.ones((config.spatial_kernels, joint_count, in_channels)))
            delta = np.zeros((config.temporal_kernel, joint_count, out_channels))
            delta[config.temporal_kernel // 2] = 1.0
            self.static_temporal = Parameter(delta + rng.normal(0.0, 0.01, size=delta.shape))
        else:
            self.spatial = SpatialFilterGenerator(in_channels, config.spatial_kernels, config.reduction_ratio, rng)
            self.temporal = TemporalFilterGenerator(
                in_channels,
                out_channels,
                config.pooled_length,
                config.inflation_ratio,
                config.temporal_kernel,
                rng,
            )

    def forward(self, x) -> GeneratedFilters:
        if self.mode is FilterMode.STATIC:
            return GeneratedFilters(spatial=self.static_spatial, temporal=self.static_temporal)
        x = as_tensor(x)
        if self.pooled_length > x.shape[-3]:
            fail(InvalidArgumentError, NetworkErrorMessages.POOLED_SIZE_TOO_LARGE.value.format(self.pooled_length, x.shape[-3]))
        x_p = nn_ops.adaptive_temporal_pool(x, self.pooled_length)
        if self.mode is FilterMode.GLOBAL:
            x_p = P.mean(x_p, axis=-2, keepdims=True)
        return GeneratedFilters(
            spatial=generate_spatial_filters(x_p, self.spatial),
            temporal=generate_temporal_filters(x_p, self.temporal),
        )
