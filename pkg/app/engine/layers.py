from typing import Optional, Sequence, Tuple

import numpy as np

from app.configs.config import ProjectConfigurations
from app.engine import nn_ops
from app.engine.module import Module, Parameter
from app.engine.tensor import Tensor

def he_normal(rng: np.random.Generator, shape: Tuple[int, ...], fan_in: int) -> np.ndarray:
    return rng.normal(0.0, np.sqrt(2.0 / max(fan_in, 1)), size=shape)

class BatchNorm(Module):
    """
    Affine batch normalization over the channels spanned by `channel_axes`.
    """
    def __init__(
        self,
        channel_shape: Sequence[int],
        channel_axes: Sequence[int],
        eps: float = ProjectConfigurations.BN_EPS.value,
        momentum: float = ProjectConfigurations.BN_MOMENTUM.value,
    ):
        super().__init__()
        channel_shape = tuple(channel_shape)
        self.channel_axes = tuple(channel_axes)
        self.eps = eps
        self.momentum = momentum
        self.gamma = Parameter(np.ones(channel_shape))
        self.beta = Parameter(np.zeros(channel_shape))
        self.register_buffer("running_mean", np.zeros(channel_shape))
        self.register_buffer("running_var", np.ones(channel_shape))

    def forward(self, x) -> Tensor:
        return nn_ops.batch_norm(
            x,
            self.gamma,
            self.beta,
            self._buffers["running_mean"],
            self._buffers["running_var"],
            channel_axes=self.channel_axes,
            training=self.training,
            eps=self.eps,
            momentum=self.momentum,
        )

class Linear(Module):
    def __init__(self, in_features: int, out_features: int, rng: np.random.Generator, bias: bool = True):
        super().__init__()
        self.weight = Parameter(he_normal(rng, (in_features, out_features), in_features))
        self.bias = Parameter(np.zeros(out_features)) if bias else None

    def forward(self, x) -> Tensor:
        return nn_ops.fully_connected(x, self.weight, self.bias)

class Conv1x1(Module):
    def __init__(self, in_channels: int, out_channels: int, rng: np.random.Generator):
        super().__init__()
        self.weight = Parameter(he_normal(rng, (in_channels, out_channels), in_channels))

    def forward(self, x) -> Tensor:
        return nn_ops.conv1x1(x, self.weight)

class TemporalConv(Module):
    def __init__(self, in_channels: int, out_channels: int, kernel: int, rng: np.random.Generator, stride: int = 1):
        super().__init__()
        self.stride = stride
        self.weight = Parameter(he_normal(rng, (kernel, in_channels, out_channels), kernel * in_channels))

    def forward(self, x) -> Tensor:
        return nn_ops.temporal_conv(x, self.weight, stride=self.stride)

class DepthwiseTemporalConv(Module):
    """
    Learned depthwise temporal kernel (K, 1, C) shared across joints.
    """
    def __init__(self, channels: int, kernel: int, rng: np.random.Generator, stride: int = 1):
        super().__init__()
        self.stride = stride
        self.weight = Parameter(he_normal(rng, (kernel, 1, channels), kernel))

    def forward(self, x) -> Tensor:
        return nn_ops.depthwise_temporal_conv(x, self.weight, stride=self.stride)

class Shortcut(Module):
    """
    Residual path of a graph block: 1x1 projection + BN when widths differ,
    identity otherwise; both subsample time by the block stride.
    """
    def __init__(self, in_channels: int, out_channels: int, stride: int, rng: Optional[np.random.Generator]):
        super().__init__()
        self.stride = stride
        self.projection = Conv1x1(in_channels, out_channels, rng) if in_channels != out_channels else None
        self.norm = BatchNorm((out_channels,), channel_axes=(-1,)) if in_channels != out_channels else None

    def forward(self, x) -> Tensor:
        if self.stride > 1:
            x = x[..., ::self.stride, :, :]
        if self.projection is None:
            return x
        return self.norm(self.projection(x))
