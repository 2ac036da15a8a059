"""
Dense float64 tensor with a reverse-mode tape.

Every differentiable operation that has at least one input requiring gradients
records a TapeNode on its output. Node indices come from one global counter, so
sorting reachable nodes by descending index replays the forward pass backwards
and visits every node exactly once.
"""
import itertools
import threading
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from app.utils.error_messages import EngineErrorMessages
from app.utils.exceptions import InvalidArgumentError, NonScalarLossError

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

_node_counter = itertools.count()
_grad_mode = threading.local()

BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]

def is_grad_enabled() -> bool:
    return getattr(_grad_mode, "enabled", True)

class no_grad:
    """
    Context manager that stops tape recording on the current thread.
    """
    def __enter__(self):
        self._previous = is_grad_enabled()
        _grad_mode.enabled = False
        return self

    def __exit__(self, exc_type, exc, tb):
        _grad_mode.enabled = self._previous
        return False

class TapeNode:
    __slots__ = ("op", "inputs", "backward_fn", "index")

    def __init__(self, op: str, inputs: Tuple["Tensor", ...], backward_fn: BackwardFn):
        self.op = op
        self.inputs = inputs
        self.backward_fn = backward_fn
        self.index = next(_node_counter)

    def __repr__(self) -> str:
        return f"TapeNode(op={self.op}, index={self.index}, inputs={len(self.inputs)})"

class Tensor:
    # numpy arrays on the left of an operator defer to the reflected Tensor method
    __array_ufunc__ = None

    def __init__(self, values, requires_grad: bool = False, name: Optional[str] = None):
        self.values = np.array(values, dtype=np.float64)
        self.requires_grad = requires_grad
        self.grad: Optional[np.ndarray] = None
        self.node: Optional[TapeNode] = None
        self.name = name

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.values.shape

    @property
    def ndim(self) -> int:
        return self.values.ndim

    @property
    def size(self) -> int:
        return self.values.size

    @property
    def is_leaf(self) -> bool:
        return self.node is None

    def item(self) -> float:
        return float(self.values.reshape(-1)[0]) if self.values.size == 1 else float("nan")

    def numpy(self) -> np.ndarray:
        return self.values

    def zero_grad(self) -> None:
        self.grad = None

    def backward(self) -> None:
        backward(self)

    def __len__(self) -> int:
        return self.values.shape[0]

    def __repr__(self) -> str:
        label = f", name={self.name}" if self.name else ""
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad}{label})"

def as_tensor(value) -> Tensor:
    if isinstance(value, Tensor):
        return value
    return Tensor(value)

def make_result(values: np.ndarray, op: str, inputs: Sequence[Tensor], backward_fn: BackwardFn) -> Tensor:
    """
    Wraps an op's output and records it on the tape when any input needs gradients.
    """
    out = Tensor.__new__(Tensor)
    out.values = np.asarray(values, dtype=np.float64)
    out.grad = None
    out.name = None
    needs_grad = is_grad_enabled() and any(t.requires_grad for t in inputs)
    out.requires_grad = needs_grad
    out.node = TapeNode(op, tuple(inputs), backward_fn) if needs_grad else None
    return out

def unbroadcast(grad: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    """
    Sums a broadcast gradient back down to `shape`.
    """
    if grad.shape == tuple(shape):
        return grad
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    keep = tuple(i for i, dim in enumerate(shape) if dim == 1 and grad.shape[i] != 1)
    if keep:
        grad = grad.sum(axis=keep, keepdims=True)
    return grad.reshape(shape)

def _collect_nodes(loss: Tensor) -> list:
    seen = set()
    ordered = []
    stack = [loss]
    while stack:
        tensor = stack.pop()
        if tensor.node is None or id(tensor) in seen:
            continue
        seen.add(id(tensor))
        ordered.append(tensor)
        stack.extend(parent for parent in tensor.node.inputs if parent.requires_grad)
    ordered.sort(key=lambda t: t.node.index, reverse=True)
    return ordered

def backward(loss: Tensor) -> None:
    """
    Accumulates d(loss)/d(leaf) into `.grad` of every leaf that requires gradients.
    Calling it twice on the same graph adds the gradients twice.
    """
    if loss.values.size != 1:
        error_logger.error(f"backward | {EngineErrorMessages.NON_SCALAR_LOSS.value.format(loss.shape)}")
        raise NonScalarLossError(EngineErrorMessages.NON_SCALAR_LOSS.value.format(loss.shape))
    if not loss.requires_grad:
        error_logger.error(f"backward | {EngineErrorMessages.NOT_ON_TAPE.value}")
        raise InvalidArgumentError(EngineErrorMessages.NOT_ON_TAPE.value)

    seed = np.ones_like(loss.values)
    if loss.node is None:
        loss.grad = seed if loss.grad is None else loss.grad + seed
        return

    pending = {id(loss): seed}
    for tensor in _collect_nodes(loss):
        grad_out = pending.pop(id(tensor), None)
        if grad_out is None:
            continue
        input_grads = tensor.node.backward_fn(grad_out)
        for parent, grad in zip(tensor.node.inputs, input_grads):
            if grad is None or not parent.requires_grad:
                continue
            if parent.node is None:
                parent.grad = grad.copy() if parent.grad is None else parent.grad + grad
            elif id(parent) in pending:
                pending[id(parent)] = pending[id(parent)] + grad
            else:
                pending[id(parent)] = grad
