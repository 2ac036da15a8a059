"""
Graph convolution blocks.

GraphConvBlock is the dense block: sum_k (A^k X) W_S^k, BN, ReLU, then a dense
temporal convolution, BN, residual and ReLU. CagBlock replaces the dense weights
with the depthwise filters generated by JSFL and two 1x1 channel mixes.
"""
from typing import Optional

import numpy as np

from app.engine import nn_ops
from app.engine import primitives as P
from app.engine.layers import BatchNorm, Conv1x1, Shortcut, TemporalConv, he_normal
from app.engine.module import Module, Parameter
from app.engine.primitives import fail
from app.engine.tensor import Tensor, as_tensor
from app.models.class_request_model.config_models import JsflConfig
from app.models.domain_models.domain_models import GeneratedFilters
from app.network.jsfl import JointSpecificFilterLearning
from app.utils.error_messages import NetworkErrorMessages
from app.utils.exceptions import ShapeMismatchError

def aggregate(x, topology) -> Tensor:
    """
    Applies every topology slice to the features.

    x: (B, T, N, C), or (B, K_S, T, N, C) when each slice already has its own
    features. topology: (B | 1, K_S, N, N) or (K_S, N, N). Returns (B, K_S, T, N, C).
    """
    x, topology = as_tensor(x), as_tensor(topology)
    joints = x.shape[-2]
    if topology.ndim < 3 or topology.shape[-1] != joints or topology.shape[-2] != joints:
        fail(ShapeMismatchError, NetworkErrorMessages.TOPOLOGY_SHAPE_MISMATCH.value.format(
            "aggregate", topology.shape, topology.shape[-3] if topology.ndim >= 3 else None, joints))
    if x.ndim == 4:
        x = P.reshape(x, x.shape[:1] + (1,) + x.shape[1:])
    slices = P.reshape(topology, topology.shape[:-2] + (1, joints, joints))
    return P.matmul(slices, x)

class GraphConvBlock(Module):
    def __init__(
        self,
        in_channels: int,
        out_channels: int,
        spatial_partitions: int,
        temporal_kernel: int,
        rng: np.random.Generator,
        stride: int = 1,
        residual: bool = True,
    ):
        super().__init__()
        self.spatial_partitions = spatial_partitions
        self.spatial_weight = Parameter(
            he_normal(rng, (spatial_partitions, in_channels, out_channels), spatial_partitions * in_channels)
        )
        self.spatial_norm = BatchNorm((out_channels,), channel_axes=(-1,))
        self.temporal = TemporalConv(out_channels, out_channels, temporal_kernel, rng, stride=stride)
        self.temporal_norm = BatchNorm((out_channels,), channel_axes=(-1,))
        self.shortcut = Shortcut(in_channels, out_channels, stride, rng) if residual else None

    def forward(self, x, topology) -> Tensor:
        x = as_tensor(x)
        if topology.shape[-3] != self.spatial_partitions:
            fail(ShapeMismatchError, NetworkErrorMessages.TOPOLOGY_SHAPE_MISMATCH.value.format(
                "GraphConvBlock", topology.shape, self.spatial_partitions, x.shape[-2]))
        per_slice = aggregate(x, topology)
        weight = P.reshape(self.spatial_weight, (self.spatial_partitions, 1) + self.spatial_weight.shape[1:])
        spatial = P.sum(P.matmul(per_slice, weight), axis=-4)
        out = self.temporal_norm(self.temporal(nn_ops.relu(self.spatial_norm(spatial))))
        if self.shortcut is not None:
            out = P.add(out, self.shortcut(x))
        return nn_ops.relu(out)

def cag_block_forward(
    x,
    topology,
    filters: GeneratedFilters,
    w1,
    w2,
    stride: int = 1,
    norm_in: Optional[Module] = None,
    norm_out: Optional[Module] = None,
    shortcut: Optional[Module] = None,
) -> Tensor:
    """
    X_S = ReLU(BN(Conv1x1(sum_k G^k (X * F_S^k), W_1)))
    out = ReLU(BN(Conv1x1(X_S (*) F_T, W_2)) + shortcut(X))

    A missing norm or shortcut is skipped. An unbatched (T, N, C) input gets
    an unbatched output.
    """
    x = as_tensor(x)
    if x.ndim == 3:
        out = cag_block_forward(P.reshape(x, (1,) + x.shape), topology, filters, w1, w2, stride, norm_in, norm_out, shortcut)
        return P.reshape(out, out.shape[1:])
    spatial_filters = as_tensor(filters.spatial)
    if spatial_filters.shape[-3] != as_tensor(topology).shape[-3]:
        fail(ShapeMismatchError, NetworkErrorMessages.TOPOLOGY_SHAPE_MISMATCH.value.format(
            "cag_block_forward", as_tensor(topology).shape, spatial_filters.shape[-3], x.shape[-2]))
    expanded = P.reshape(x, x.shape[:-3] + (1,) + x.shape[-3:])
    scaled = nn_ops.depthwise_joint_scale(expanded, spatial_filters)
    x_s = nn_ops.conv1x1(P.sum(aggregate(scaled, topology), axis=-4), w1)
    if norm_in is not None:
        x_s = norm_in(x_s)
    x_s = nn_ops.relu(x_s)

    x_t = nn_ops.conv1x1(nn_ops.depthwise_temporal_conv(x_s, filters.temporal, stride=stride), w2)
    if norm_out is not None:
        x_t = norm_out(x_t)
    if shortcut is not None:
        x_t = P.add(x_t, shortcut(x))
    return nn_ops.relu(x_t)

class CagBlock(Module):
    """
    Condition-adaptive graph block. When `capture_filters` is set the block keeps a
    numpy copy of the filters of its latest forward pass in `last_filters`.
    """
    def __init__(
        self,
        in_channels: int,
        out_channels: int,
        joint_count: int,
        jsfl: JsflConfig,
        rng: np.random.Generator,
        stride: int = 1,
    ):
        super().__init__()
        self.stride = stride
        self.filters = JointSpecificFilterLearning(in_channels, out_channels, joint_count, jsfl, rng)
        self.mix_in = Conv1x1(in_channels, out_channels, rng)
        self.norm_in = BatchNorm((out_channels,), channel_axes=(-1,))
        self.mix_out = Conv1x1(out_channels, out_channels, rng)
        self.norm_out = BatchNorm((out_channels,), channel_axes=(-1,))
        self.shortcut = Shortcut(in_channels, out_channels, stride, rng)
        self.capture_filters = False
        self.last_filters: Optional[GeneratedFilters] = None

    def forward(self, x, topology) -> Tensor:
        filters = self.filters(x)
        if self.capture_filters:
            self.last_filters = GeneratedFilters(
                spatial=as_tensor(filters.spatial).values.copy(),
                temporal=as_tensor(filters.temporal).values.copy(),
            )
        return cag_block_forward(
            x,
            topology,
            filters,
            self.mix_in.weight,
            self.mix_out.weight,
            stride=self.stride,
            norm_in=self.norm_in,
            norm_out=self.norm_out,
            shortcut=self.shortcut,
        )
