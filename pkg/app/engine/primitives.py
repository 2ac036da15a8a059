"""
Differentiable building blocks on top of app.engine.tensor.

Each primitive computes its forward value with numpy and registers a closure
that maps the output gradient to one gradient per input (None for inputs that
take no gradient).
"""
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from app.engine.tensor import Tensor, as_tensor, make_result, unbroadcast
from app.utils.error_messages import EngineErrorMessages
from app.utils.exceptions import InvalidArgumentError, ShapeMismatchError

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

Axis = Optional[Union[int, Tuple[int, ...]]]

def fail(exc_cls, message: str):
    error_logger.error(f"engine | {message}")
    raise exc_cls(message)

def _broadcast_shape(op: str, a_shape, b_shape) -> Tuple[int, ...]:
    try:
        return np.broadcast_shapes(a_shape, b_shape)
    except ValueError:
        fail(ShapeMismatchError, EngineErrorMessages.BROADCAST_MISMATCH.value.format(op, a_shape, b_shape))

def _normalize_axes(axis: Axis, ndim: int) -> Tuple[int, ...]:
    axes = (axis,) if isinstance(axis, int) else tuple(axis)
    normalized = []
    for ax in axes:
        if not -ndim <= ax < ndim:
            fail(InvalidArgumentError, EngineErrorMessages.AXIS_OUT_OF_RANGE.value.format("reduce", ax, ndim))
        normalized.append(ax % ndim)
    return tuple(normalized)

# ---------------------------------------------------------------------------------------------------------------------------------
# ELEMENTWISE ARITHMETIC
# ---------------------------------------------------------------------------------------------------------------------------------
def add(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shape("add", a.shape, b.shape)

    def backward_fn(g):
        return unbroadcast(g, a.shape), unbroadcast(g, b.shape)
    return make_result(a.values + b.values, "add", (a, b), backward_fn)

def sub(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shape("sub", a.shape, b.shape)

    def backward_fn(g):
        return unbroadcast(g, a.shape), unbroadcast(-g, b.shape)
    return make_result(a.values - b.values, "sub", (a, b), backward_fn)

def mul(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shape("mul", a.shape, b.shape)
    av, bv = a.values, b.values

    def backward_fn(g):
        ga = unbroadcast(g * bv, a.shape) if a.requires_grad else None
        gb = unbroadcast(g * av, b.shape) if b.requires_grad else None
        return ga, gb
    return make_result(av * bv, "mul", (a, b), backward_fn)

def div(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    _broadcast_shape("div", a.shape, b.shape)
    av, bv = a.values, b.values

    def backward_fn(g):
        ga = unbroadcast(g / bv, a.shape) if a.requires_grad else None
        gb = unbroadcast(-g * av / (bv * bv), b.shape) if b.requires_grad else None
        return ga, gb
    return make_result(av / bv, "div", (a, b), backward_fn)

def neg(a) -> Tensor:
    a = as_tensor(a)
    return make_result(-a.values, "neg", (a,), lambda g: (-g,))

def power(a, exponent: float) -> Tensor:
    a = as_tensor(a)
    av = a.values

    def backward_fn(g):
        return (g * exponent * np.power(av, exponent - 1),)
    return make_result(np.power(av, exponent), "power", (a,), backward_fn)

def exp(a) -> Tensor:
    a = as_tensor(a)
    out = np.exp(a.values)
    return make_result(out, "exp", (a,), lambda g: (g * out,))

def log(a) -> Tensor:
    a = as_tensor(a)
    av = a.values
    return make_result(np.log(av), "log", (a,), lambda g: (g / av,))

def sqrt(a) -> Tensor:
    a = as_tensor(a)
    out = np.sqrt(a.values)
    return make_result(out, "sqrt", (a,), lambda g: (g * 0.5 / out,))

def clamp_min(a, floor: float) -> Tensor:
    """
    max(a, floor); values at or below the floor pass no gradient.
    """
    a = as_tensor(a)
    mask = a.values > floor
    return make_result(np.maximum(a.values, floor), "clamp_min", (a,), lambda g: (g * mask,))

def detach(a) -> Tensor:
    a = as_tensor(a)
    return make_result(a.values, "detach", (), lambda g: ())

# ---------------------------------------------------------------------------------------------------------------------------------
# LINEAR ALGEBRA
# ---------------------------------------------------------------------------------------------------------------------------------
def matmul(a, b) -> Tensor:
    a, b = as_tensor(a), as_tensor(b)
    if a.ndim < 2 or b.ndim < 2:
        fail(ShapeMismatchError, EngineErrorMessages.MATMUL_RANK.value.format(a.shape, b.shape))
    if a.shape[-1] != b.shape[-2]:
        fail(ShapeMismatchError, EngineErrorMessages.MATMUL_SHAPE_MISMATCH.value.format(a.shape, b.shape))
    try:
        np.broadcast_shapes(a.shape[:-2], b.shape[:-2])
    except ValueError:
        fail(ShapeMismatchError, EngineErrorMessages.MATMUL_BATCH_MISMATCH.value.format(a.shape, b.shape))
    av, bv = a.values, b.values

    def backward_fn(g):
        ga = gb = None
        if a.requires_grad:
            ga = unbroadcast(g @ np.swapaxes(bv, -1, -2), a.shape)
        if b.requires_grad:
            if bv.ndim == 2:
                # a plain weight matrix: fold every leading axis into rows
                a_rows = np.broadcast_to(av, g.shape[:-1] + av.shape[-1:]).reshape(-1, av.shape[-1])
                gb = a_rows.T @ g.reshape(-1, g.shape[-1])
            else:
                gb = unbroadcast(np.swapaxes(av, -1, -2) @ g, b.shape)
        return ga, gb
    return make_result(av @ bv, "matmul", (a, b), backward_fn)

# ---------------------------------------------------------------------------------------------------------------------------------
# REDUCTIONS
# ---------------------------------------------------------------------------------------------------------------------------------
def sum(a, axis: Axis = None, keepdims: bool = False) -> Tensor:
    a = as_tensor(a)
    axes = None if axis is None else _normalize_axes(axis, a.ndim)

    def backward_fn(g):
        if axes is not None and not keepdims:
            g = np.expand_dims(g, axes)
        return (np.broadcast_to(g, a.shape),)
    return make_result(a.values.sum(axis=axes, keepdims=keepdims), "sum", (a,), backward_fn)

def mean(a, axis: Axis = None, keepdims: bool = False) -> Tensor:
    a = as_tensor(a)
    if axis is None:
        count = a.size
    else:
        count = int(np.prod([a.shape[ax] for ax in _normalize_axes(axis, a.ndim)]))
    return mul(sum(a, axis=axis, keepdims=keepdims), 1.0 / count)

def max(a, axis: Axis = None, keepdims: bool = False) -> Tensor:
    """
    Maximum along `axis`. Tied maxima share the incoming gradient equally.
    """
    a = as_tensor(a)
    axes = None if axis is None else _normalize_axes(axis, a.ndim)
    peak = a.values.max(axis=axes, keepdims=True)
    mask = a.values == peak
    counts = mask.sum(axis=axes, keepdims=True)
    out = peak if keepdims else (peak.reshape(()) if axes is None else np.squeeze(peak, axis=axes))

    def backward_fn(g):
        return (mask * (g.reshape(peak.shape) / counts),)
    return make_result(out, "max", (a,), backward_fn)

# ---------------------------------------------------------------------------------------------------------------------------------
# SHAPE MANIPULATION
# ---------------------------------------------------------------------------------------------------------------------------------
def reshape(a, shape: Sequence[int]) -> Tensor:
    a = as_tensor(a)
    try:
        out = a.values.reshape(shape)
    except ValueError:
        fail(ShapeMismatchError, EngineErrorMessages.RESHAPE_MISMATCH.value.format(a.shape, tuple(shape)))
    return make_result(out, "reshape", (a,), lambda g: (g.reshape(a.shape),))

def transpose(a, axes: Optional[Sequence[int]] = None) -> Tensor:
    a = as_tensor(a)
    axes = tuple(reversed(range(a.ndim))) if axes is None else tuple(ax % a.ndim for ax in axes)
    inverse = tuple(np.argsort(axes))
    return make_result(np.transpose(a.values, axes), "transpose", (a,), lambda g: (np.transpose(g, inverse),))

def swapaxes(a, first: int, second: int) -> Tensor:
    a = as_tensor(a)
    axes = list(range(a.ndim))
    axes[first], axes[second] = axes[second], axes[first]
    return transpose(a, axes)

def broadcast_to(a, shape: Sequence[int]) -> Tensor:
    a = as_tensor(a)
    target = _broadcast_shape("broadcast_to", a.shape, tuple(shape))
    return make_result(np.broadcast_to(a.values, target), "broadcast_to", (a,), lambda g: (unbroadcast(g, a.shape),))

def getitem(a, index) -> Tensor:
    a = as_tensor(a)

    def backward_fn(g):
        full = np.zeros(a.shape)
        np.add.at(full, index, g)
        return (full,)
    return make_result(a.values[index], "getitem", (a,), backward_fn)

def concat(tensors: Sequence, axis: int = 0) -> Tensor:
    if not tensors:
        fail(InvalidArgumentError, EngineErrorMessages.EMPTY_CONCAT.value.format("concat"))
    tensors = [as_tensor(t) for t in tensors]
    try:
        out = np.concatenate([t.values for t in tensors], axis=axis)
    except ValueError:
        fail(ShapeMismatchError, EngineErrorMessages.BROADCAST_MISMATCH.value.format(
            "concat", tensors[0].shape, [t.shape for t in tensors[1:]]))
    boundaries = np.cumsum([t.shape[axis] for t in tensors])[:-1]
    return make_result(out, "concat", tensors, lambda g: tuple(np.split(g, boundaries, axis=axis)))

def stack(tensors: Sequence, axis: int = 0) -> Tensor:
    if not tensors:
        fail(InvalidArgumentError, EngineErrorMessages.EMPTY_CONCAT.value.format("stack"))
    tensors = [as_tensor(t) for t in tensors]
    try:
        out = np.stack([t.values for t in tensors], axis=axis)
    except ValueError:
        fail(ShapeMismatchError, EngineErrorMessages.BROADCAST_MISMATCH.value.format(
            "stack", tensors[0].shape, [t.shape for t in tensors[1:]]))

    def backward_fn(g):
        moved = np.moveaxis(g, axis, 0)
        return tuple(moved[i] for i in range(len(tensors)))
    return make_result(out, "stack", tensors, backward_fn)

# operator sugar used throughout the network code
Tensor.__add__ = lambda self, other: add(self, other)
Tensor.__radd__ = lambda self, other: add(other, self)
Tensor.__sub__ = lambda self, other: sub(self, other)
Tensor.__rsub__ = lambda self, other: sub(other, self)
Tensor.__mul__ = lambda self, other: mul(self, other)
Tensor.__rmul__ = lambda self, other: mul(other, self)
Tensor.__truediv__ = lambda self, other: div(self, other)
Tensor.__rtruediv__ = lambda self, other: div(other, self)
Tensor.__neg__ = lambda self: neg(self)
Tensor.__pow__ = lambda self, exponent: power(self, exponent)
Tensor.__matmul__ = lambda self, other: matmul(self, other)
Tensor.__getitem__ = lambda self, index: getitem(self, index)
