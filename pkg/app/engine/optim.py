from typing import Dict, List, Sequence

import numpy as np

from app.engine.module import Parameter

class Adam:
    """
    Adam over parameter groups. Each group is {"name", "params", "lr"}; the
    schedule scales every group's base learning rate by one shared factor.
    """
    def __init__(
        self,
        groups: Sequence[Dict],
        betas=(0.9, 0.999),
        eps: float = 1e-8,
        weight_decay: float = 0.0,
    ):
        self.groups: List[Dict] = []
        for group in groups:
            params = list(group["params"])
            self.groups.append({
                "name": group.get("name", f"group{len(self.groups)}"),
                "params": params,
                "base_lr": float(group["lr"]),
                "lr": float(group["lr"]),
            })
        self.beta1, self.beta2 = betas
        self.eps = eps
        self.weight_decay = weight_decay
        self.step_count = 0
        self._first: Dict[int, np.ndarray] = {}
        self._second: Dict[int, np.ndarray] = {}

    def set_lr_factor(self, factor: float) -> None:
        for group in self.groups:
            group["lr"] = group["base_lr"] * factor

    def learning_rates(self) -> Dict[str, float]:
        return {group["name"]: group["lr"] for group in self.groups}

    def zero_grad(self) -> None:
        for group in self.groups:
            for param in group["params"]:
                param.zero_grad()

    def step(self) -> None:
        self.step_count += 1
        bias1 = 1.0 - self.beta1 ** self.step_count
        bias2 = 1.0 - self.beta2 ** self.step_count
        for group in self.groups:
            lr = group["lr"]
            for param in group["params"]:
                if param.grad is None:
                    continue
                grad = param.grad
                if self.weight_decay:
                    grad = grad + self.weight_decay * param.values
                key = id(param)
                first = self._first.setdefault(key, np.zeros_like(param.values))
                second = self._second.setdefault(key, np.zeros_like(param.values))
                first *= self.beta1
                first += (1.0 - self.beta1) * grad
                second *= self.beta2
                second += (1.0 - self.beta2) * grad * grad
                param.values -= lr * (first / bias1) / (np.sqrt(second / bias2) + self.eps)

def warmup_step_decay(
    epoch: int,
    step_in_epoch: int,
    steps_per_epoch: int,
    warmup_epochs: int,
    decay_epochs: Sequence[int],
    decay_ratio: float,
) -> float:
    """
    Learning rate factor: a linear ramp from 0 to 1 across the warmup steps,
    then `decay_ratio` applied once per decay epoch already reached.
    """
    factor = decay_ratio ** sum(1 for boundary in decay_epochs if epoch >= boundary)
    warmup_steps = warmup_epochs * steps_per_epoch
    if warmup_steps:
        done = epoch * steps_per_epoch + step_in_epoch + 1
        factor *= min(1.0, done / warmup_steps)
    return factor

def parameter_groups(named_parameters, base_lr: float, special_prefix: str, special_lr: float) -> List[Dict]:
    """
    Splits parameters into the main group and the group whose names start with `special_prefix`.
    """
    main: List[Parameter] = []
    special: List[Parameter] = []
    for name, param in named_parameters:
        (special if name.startswith(special_prefix) else main).append(param)
    groups = [{"name": "main", "params": main, "lr": base_lr}]
    if special:
        groups.append({"name": special_prefix.rstrip("."), "params": special, "lr": special_lr})
    return groups
