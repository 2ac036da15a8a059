"""
Network operators used by the graph blocks: channel mixing, depthwise joint and
temporal filtering, dense temporal convolution, batch normalization,
activations, losses and temporal pooling.

Layout convention: the last three axes of a feature map are (time, joint,
channel); anything in front of them is a batch axis and broadcasts.
"""
from typing import Optional, Sequence

import numpy as np

from app.engine import primitives as P
from app.engine.primitives import fail
from app.engine.tensor import Tensor, as_tensor, make_result, unbroadcast
from app.utils.error_messages import EngineErrorMessages
from app.utils.exceptions import InvalidArgumentError, ShapeMismatchError

def _check_stride(op: str, stride: int) -> None:
    if not isinstance(stride, (int, np.integer)) or stride < 1:
        fail(InvalidArgumentError, EngineErrorMessages.INVALID_STRIDE.value.format(op, stride))

def _check_odd_kernel(op: str, kernel: int) -> None:
    if kernel % 2 == 0:
        fail(InvalidArgumentError, EngineErrorMessages.EVEN_TEMPORAL_KERNEL.value.format(op, kernel))

def _pad_time(values: np.ndarray, half: int) -> np.ndarray:
    widths = [(0, 0)] * (values.ndim - 3) + [(half, half), (0, 0), (0, 0)]
    return np.pad(values, widths)

def output_length(frames: int, stride: int) -> int:
    return (frames - 1) // stride + 1

# ---------------------------------------------------------------------------------------------------------------------------------
# CHANNEL MIXING
# ---------------------------------------------------------------------------------------------------------------------------------
def conv1x1(x, w) -> Tensor:
    """
    Per-position linear map over the channel axis; equal to a matmul over the
    flattened (rows, C) view.
    """
    x, w = as_tensor(x), as_tensor(w)
    if w.ndim != 2 or x.ndim < 1 or x.shape[-1] != w.shape[0]:
        fail(ShapeMismatchError, EngineErrorMessages.CHANNEL_MISMATCH.value.format("conv1x1", x.shape, w.shape))
    flat = P.reshape(x, (-1, x.shape[-1]))
    return P.reshape(P.matmul(flat, w), x.shape[:-1] + (w.shape[1],))

def fully_connected(x, w, bias=None) -> Tensor:
    x, w = as_tensor(x), as_tensor(w)
    if w.ndim != 2 or x.shape[-1] != w.shape[0]:
        fail(ShapeMismatchError, EngineErrorMessages.CHANNEL_MISMATCH.value.format("fully_connected", x.shape, w.shape))
    out = conv1x1(x, w)
    if bias is None:
        return out
    bias = as_tensor(bias)
    if bias.shape != (w.shape[1],):
        fail(ShapeMismatchError, EngineErrorMessages.CHANNEL_MISMATCH.value.format("fully_connected", w.shape, bias.shape))
    return P.add(out, bias)

# ---------------------------------------------------------------------------------------------------------------------------------
# DEPTHWISE FILTERING
# ---------------------------------------------------------------------------------------------------------------------------------
def depthwise_joint_scale(x, f) -> Tensor:
    """
    out[..., t, n, c] = x[..., t, n, c] * f[..., n, c]

    A joint axis of length 1 in `f` shares one filter across all joints.
    """
    x, f = as_tensor(x), as_tensor(f)
    if x.ndim < 3 or f.ndim < 2 or x.shape[-1] != f.shape[-1] or f.shape[-2] not in (1, x.shape[-2]):
        fail(ShapeMismatchError, EngineErrorMessages.FILTER_SHAPE_MISMATCH.value.format("depthwise_joint_scale", x.shape, f.shape))
    expanded = P.reshape(f, f.shape[:-2] + (1,) + f.shape[-2:])
    return P.mul(x, expanded)

def depthwise_temporal_conv(x, f, stride: int = 1) -> Tensor:
    """
    out[..., t, n, c] = sum_k x[..., t*stride + k - K//2, n, c] * f[..., k, n, c]

    Zero padding keeps the output length at ceil(T / stride).
    """
    x, f = as_tensor(x), as_tensor(f)
    op = "depthwise_temporal_conv"
    _check_stride(op, stride)
    if x.ndim < 3 or f.ndim < 3 or x.shape[-1] != f.shape[-1] or f.shape[-2] not in (1, x.shape[-2]):
        fail(ShapeMismatchError, EngineErrorMessages.FILTER_SHAPE_MISMATCH.value.format(op, x.shape, f.shape))
    kernel = f.shape[-3]
    _check_odd_kernel(op, kernel)
    lead = P._broadcast_shape(op, x.shape[:-3], f.shape[:-3])

    frames, half = x.shape[-3], kernel // 2
    xp = _pad_time(x.values, half)
    fv = f.values
    out = None
    for k in range(kernel):
        term = xp[..., k:k + frames:stride, :, :] * fv[..., k:k + 1, :, :]
        out = term if out is None else out + term

    def backward_fn(g):
        gx = gf = None
        if x.requires_grad:
            gxp = np.zeros(lead + xp.shape[-3:])
            for k in range(kernel):
                gxp[..., k:k + frames:stride, :, :] += g * fv[..., k:k + 1, :, :]
            gx = unbroadcast(gxp[..., half:half + frames, :, :], x.shape)
        if f.requires_grad:
            per_tap = [(g * xp[..., k:k + frames:stride, :, :]).sum(axis=-3) for k in range(kernel)]
            gf = unbroadcast(np.stack(per_tap, axis=-3), f.shape)
        return gx, gf
    return make_result(out, op, (x, f), backward_fn)

def temporal_conv(x, w, stride: int = 1) -> Tensor:
    """
    Dense temporal convolution: w has shape (K, C, C') and mixes channels at
    every tap. Same padding and stride rules as depthwise_temporal_conv.
    """
    x, w = as_tensor(x), as_tensor(w)
    op = "temporal_conv"
    _check_stride(op, stride)
    if x.ndim < 3 or w.ndim != 3 or x.shape[-1] != w.shape[1]:
        fail(ShapeMismatchError, EngineErrorMessages.CHANNEL_MISMATCH.value.format(op, x.shape, w.shape))
    kernel, c_in, c_out = w.shape
    _check_odd_kernel(op, kernel)

    frames, half = x.shape[-3], kernel // 2
    xp = _pad_time(x.values, half)
    wv = w.values
    out = None
    for k in range(kernel):
        term = xp[..., k:k + frames:stride, :, :] @ wv[k]
        out = term if out is None else out + term

    def backward_fn(g):
        gx = gw = None
        if x.requires_grad:
            gxp = np.zeros(xp.shape)
            for k in range(kernel):
                gxp[..., k:k + frames:stride, :, :] += g @ wv[k].T
            gx = gxp[..., half:half + frames, :, :]
        if w.requires_grad:
            g_rows = g.reshape(-1, c_out)
            gw = np.stack([xp[..., k:k + frames:stride, :, :].reshape(-1, c_in).T @ g_rows for k in range(kernel)])
        return gx, gw
    return make_result(out, op, (x, w), backward_fn)

# ---------------------------------------------------------------------------------------------------------------------------------
# NORMALIZATION
# ---------------------------------------------------------------------------------------------------------------------------------
def batch_norm(
    x,
    gamma,
    beta,
    running_mean: Optional[np.ndarray],
    running_var: Optional[np.ndarray],
    channel_axes: Sequence[int],
    training: bool,
    eps: float,
    momentum: float,
) -> Tensor:
    """
    Normalizes every channel, indexed by the axes in `channel_axes`, with
    statistics taken over all remaining axes. Training mode uses batch statistics and
    updates the running buffers in place; eval mode reads the buffers.
    """
    x, gamma, beta = as_tensor(x), as_tensor(gamma), as_tensor(beta)
    if eps <= 0:
        fail(InvalidArgumentError, EngineErrorMessages.BN_EPS_NOT_POSITIVE.value.format(eps))
    axes = tuple(sorted(P._normalize_axes(tuple(channel_axes), x.ndim)))
    reduce_axes = tuple(i for i in range(x.ndim) if i not in axes)
    channel_shape = tuple(x.shape[i] for i in axes)
    if gamma.shape != channel_shape or beta.shape != channel_shape:
        fail(ShapeMismatchError, EngineErrorMessages.BN_AFFINE_MISMATCH.value.format(gamma.shape, channel_shape))
    broadcast_shape = tuple(x.shape[i] if i in axes else 1 for i in range(x.ndim))

    xv = x.values
    if training:
        count = int(np.prod([x.shape[i] for i in reduce_axes])) if reduce_axes else 1
        mu = xv.mean(axis=reduce_axes, keepdims=True)
        var = xv.var(axis=reduce_axes, keepdims=True)
        if running_mean is not None and running_var is not None:
            unbiased = var * count / (count - 1) if count > 1 else var
            running_mean *= 1.0 - momentum
            running_mean += momentum * mu.reshape(channel_shape)
            running_var *= 1.0 - momentum
            running_var += momentum * unbiased.reshape(channel_shape)
    else:
        mu = running_mean.reshape(broadcast_shape)
        var = running_var.reshape(broadcast_shape)

    inv_std = 1.0 / np.sqrt(var + eps)
    xhat = (xv - mu) * inv_std
    gamma_b = gamma.values.reshape(broadcast_shape)
    out = xhat * gamma_b + beta.values.reshape(broadcast_shape)

    def backward_fn(g):
        gx = gg = gb = None
        if gamma.requires_grad:
            gg = (g * xhat).sum(axis=reduce_axes).reshape(channel_shape)
        if beta.requires_grad:
            gb = g.sum(axis=reduce_axes).reshape(channel_shape)
        if x.requires_grad:
            gxhat = g * gamma_b
            if training:
                gx = inv_std * (
                    gxhat
                    - gxhat.mean(axis=reduce_axes, keepdims=True)
                    - xhat * (gxhat * xhat).mean(axis=reduce_axes, keepdims=True)
                )
            else:
                gx = gxhat * inv_std
        return gx, gg, gb
    return make_result(out, "batch_norm", (x, gamma, beta), backward_fn)

# ---------------------------------------------------------------------------------------------------------------------------------
# ACTIVATIONS
# ---------------------------------------------------------------------------------------------------------------------------------
def relu(x) -> Tensor:
    x = as_tensor(x)
    mask = x.values > 0
    return make_result(np.where(mask, x.values, 0.0), "relu", (x,), lambda g: (g * mask,))

def softmax(x, axis: int = -1) -> Tensor:
    x = as_tensor(x)
    P._normalize_axes(axis, x.ndim)
    shifted = np.exp(x.values - x.values.max(axis=axis, keepdims=True))
    out = shifted / shifted.sum(axis=axis, keepdims=True)

    def backward_fn(g):
        return (out * (g - (g * out).sum(axis=axis, keepdims=True)),)
    return make_result(out, "softmax", (x,), backward_fn)

def log_softmax(x, axis: int = -1) -> Tensor:
    x = as_tensor(x)
    P._normalize_axes(axis, x.ndim)
    shifted = x.values - x.values.max(axis=axis, keepdims=True)
    out = shifted - np.log(np.exp(shifted).sum(axis=axis, keepdims=True))
    probs = np.exp(out)

    def backward_fn(g):
        return (g - probs * g.sum(axis=axis, keepdims=True),)
    return make_result(out, "log_softmax", (x,), backward_fn)

def logsumexp(x, axis=None, keepdims: bool = False) -> Tensor:
    x = as_tensor(x)
    axes = None if axis is None else P._normalize_axes(axis, x.ndim)
    peak = x.values.max(axis=axes, keepdims=True)
    total = np.exp(x.values - peak).sum(axis=axes, keepdims=True)
    out_k = peak + np.log(total)
    weights = np.exp(x.values - out_k)
    out = out_k if keepdims else (out_k.reshape(()) if axes is None else np.squeeze(out_k, axis=axes))

    def backward_fn(g):
        return (weights * g.reshape(out_k.shape),)
    return make_result(out, "logsumexp", (x,), backward_fn)

def softplus(x) -> Tensor:
    x = as_tensor(x)
    sigmoid = np.exp(-np.logaddexp(0.0, -x.values))
    return make_result(np.logaddexp(0.0, x.values), "softplus", (x,), lambda g: (g * sigmoid,))

def activation(x, kind: str, axis: int = -1) -> Tensor:
    if kind == "relu":
        return relu(x)
    if kind == "softmax":
        return softmax(x, axis=axis)
    fail(InvalidArgumentError, EngineErrorMessages.UNKNOWN_ACTIVATION.value.format(kind))

def cross_entropy(logits, labels) -> Tensor:
    """
    Mean softmax cross-entropy of (B, K) logits against integer labels.
    """
    logits = as_tensor(logits)
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    classes = logits.shape[-1]
    if logits.ndim != 2 or labels.shape[0] != logits.shape[0]:
        fail(ShapeMismatchError, EngineErrorMessages.CHANNEL_MISMATCH.value.format("cross_entropy", logits.shape, labels.shape))
    for label in labels:
        if not 0 <= label < classes:
            fail(InvalidArgumentError, EngineErrorMessages.LABEL_OUT_OF_RANGE.value.format(int(label), classes))
    picked = P.getitem(log_softmax(logits, axis=-1), (np.arange(labels.shape[0]), labels))
    return P.neg(P.mean(picked))

# ---------------------------------------------------------------------------------------------------------------------------------
# TEMPORAL POOLING
# ---------------------------------------------------------------------------------------------------------------------------------
def pooling_matrix(frames: int, pooled_length: int) -> np.ndarray:
    """
    (T_P, T) averaging matrix over contiguous bins whose sizes differ by at most one.
    """
    matrix = np.zeros((pooled_length, frames))
    for row, bin_frames in enumerate(np.array_split(np.arange(frames), pooled_length)):
        matrix[row, bin_frames] = 1.0 / len(bin_frames)
    return matrix

def adaptive_temporal_pool(x, pooled_length: int) -> Tensor:
    x = as_tensor(x)
    frames = x.shape[-3]
    if not 1 <= pooled_length <= frames:
        fail(InvalidArgumentError, EngineErrorMessages.POOL_SIZE_OUT_OF_RANGE.value.format(frames, pooled_length))
    lead, joints, channels = x.shape[:-3], x.shape[-2], x.shape[-1]
    flat = P.reshape(x, lead + (frames, joints * channels))
    pooled = P.matmul(Tensor(pooling_matrix(frames, pooled_length)), flat)
    return P.reshape(pooled, lead + (pooled_length, joints, channels))

def temporal_mean(x) -> Tensor:
    return P.mean(x, axis=-3)

def temporal_max(x) -> Tensor:
    return P.max(x, axis=-3)

def global_average(x) -> Tensor:
    return P.mean(x, axis=(-3, -2))

def pool(x, kind: str, pooled_length: Optional[int] = None) -> Tensor:
    if kind == "adaptive_temporal":
        return adaptive_temporal_pool(x, pooled_length)
    if kind == "temporal_mean":
        return temporal_mean(x)
    if kind == "temporal_max":
        return temporal_max(x)
    if kind == "global_average":
        return global_average(x)
    fail(InvalidArgumentError, EngineErrorMessages.UNKNOWN_POOL_KIND.value.format(kind))
