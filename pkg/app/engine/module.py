from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from app.engine.primitives import fail
from app.engine.tensor import Tensor
from app.utils.error_messages import EngineErrorMessages
from app.utils.exceptions import ShapeMismatchError

class Parameter(Tensor):
    """
    A leaf tensor that always requires gradients and is discovered by Module.
    """
    def __init__(self, values, name: Optional[str] = None):
        super().__init__(values, requires_grad=True, name=name)

class Module:
    """
    Attribute-discovered container of parameters, buffers and child modules.

    Parameters and child modules are found by walking instance attributes in
    definition order; buffers (running statistics) are registered explicitly and
    are saved with the parameters but never optimized.
    """
    def __init__(self):
        self.training = True
        self._buffers: Dict[str, np.ndarray] = {}

    def register_buffer(self, name: str, value: np.ndarray) -> None:
        self._buffers[name] = np.array(value, dtype=np.float64)

    def buffer(self, name: str) -> np.ndarray:
        return self._buffers[name]

    def children(self) -> Iterator[Tuple[str, "Module"]]:
        for attr, value in vars(self).items():
            if isinstance(value, Module):
                yield attr, value

    def named_parameters(self, prefix: str = "") -> Iterator[Tuple[str, Parameter]]:
        for attr, value in vars(self).items():
            if isinstance(value, Parameter):
                yield f"{prefix}{attr}", value
            elif isinstance(value, Module):
                yield from value.named_parameters(prefix=f"{prefix}{attr}.")

    def parameters(self) -> List[Parameter]:
        return [param for _, param in self.named_parameters()]

    def named_buffers(self, prefix: str = "") -> Iterator[Tuple[str, np.ndarray]]:
        for name, value in self._buffers.items():
            yield f"{prefix}{name}", value
        for attr, child in self.children():
            yield from child.named_buffers(prefix=f"{prefix}{attr}.")

    def num_parameters(self) -> int:
        return int(sum(param.size for param in self.parameters()))

    def train(self, mode: bool = True) -> "Module":
        self.training = mode
        for _, child in self.children():
            child.train(mode)
        return self

    def eval(self) -> "Module":
        return self.train(False)

    def zero_grad(self) -> None:
        for param in self.parameters():
            param.zero_grad()

    def state_dict(self) -> Dict[str, np.ndarray]:
        state = {name: param.values.copy() for name, param in self.named_parameters()}
        state.update({name: value.copy() for name, value in self.named_buffers()})
        return state

    def load_state_dict(self, state: Dict[str, np.ndarray], strict: bool = True) -> None:
        targets: Dict[str, np.ndarray] = {name: param.values for name, param in self.named_parameters()}
        targets.update(dict(self.named_buffers()))
        if strict:
            missing = sorted(set(targets) - set(state))
            if missing:
                fail(ShapeMismatchError, EngineErrorMessages.STATE_DICT_MISSING_KEY.value.format(missing[0]))
            unexpected = sorted(set(state) - set(targets))
            if unexpected:
                fail(ShapeMismatchError, EngineErrorMessages.STATE_DICT_UNEXPECTED_KEY.value.format(unexpected[0]))
        for name, target in targets.items():
            if name not in state:
                continue
            value = np.asarray(state[name], dtype=np.float64)
            if value.shape != target.shape:
                fail(ShapeMismatchError, EngineErrorMessages.STATE_DICT_SHAPE_MISMATCH.value.format(name, value.shape, target.shape))
            # in place, so optimizers and buffers keep their references
            target[...] = value

    def forward(self, *args, **kwargs):
        raise NotImplementedError

    def __call__(self, *args, **kwargs):
        return self.forward(*args, **kwargs)

class ModuleList(Module):
    def __init__(self, modules=()):
        super().__init__()
        self._items: List[Module] = []
        for module in modules:
            self.append(module)

    def append(self, module: Module) -> None:
        self._items.append(module)
        setattr(self, str(len(self._items) - 1), module)

    def __iter__(self) -> Iterator[Module]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __getitem__(self, index: int) -> Module:
        return self._items[index]
