"""
Central finite-difference checker for tape gradients.
"""
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.configs.config import ProjectConfigurations
from app.engine.primitives import fail
from app.engine.tensor import Tensor, backward, no_grad
from app.models.class_return_model.services_class_response_models import GradCheckReport
from app.utils.error_messages import EngineErrorMessages
from app.utils.exceptions import InvalidArgumentError, NonDeterministicFunctionError, NonScalarLossError

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

def relative_error(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(a), abs(b))

def _scalar(fn: Callable[..., Tensor], inputs: Sequence[Tensor]) -> float:
    with no_grad():
        out = fn(*inputs)
    if out.values.size != 1:
        fail(NonScalarLossError, EngineErrorMessages.NON_SCALAR_LOSS.value.format(out.shape))
    return float(out.values.reshape(-1)[0])

def _kink(f_at: Callable[[float], float], first: float, h: float, tol: float) -> Tuple[bool, float]:
    """
    Evaluates one coordinate at steps h and h/2. Returns (is_kink, central difference at h).

    On a smooth coordinate the one-sided gap f'(x+) - f'(x-) shrinks linearly with the
    step and the two central differences agree. A kink inside [x-h, x+h] breaks one of
    the two.
    """
    half = 0.5 * h
    f_plus, f_minus = f_at(h), f_at(-h)
    f_half_plus, f_half_minus = f_at(half), f_at(-half)
    gap = (f_plus - first) / h - (first - f_minus) / h
    half_gap = (f_half_plus - first) / half - (first - f_half_minus) / half
    numeric = (f_plus - f_minus) / (2.0 * h)
    half_numeric = (f_half_plus - f_half_minus) / h
    kink = relative_error(half_gap, 0.5 * gap) > tol or relative_error(numeric, half_numeric) > tol
    return kink, numeric

def finite_diff_check(
    fn: Callable[..., Tensor],
    inputs: Union[Tensor, Sequence[Tensor]],
    h: float = ProjectConfigurations.GRADCHECK_STEP.value,
    tol: float = ProjectConfigurations.GRADCHECK_TOLERANCE.value,
    name: str = "function",
    max_coordinates: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> GradCheckReport:
    """
    Compares the tape gradient of scalar `fn(*inputs)` with (f(x+h) - f(x-h)) / 2h
    on every coordinate of every input, or on `max_coordinates` sampled ones per input.

    A coordinate with a kink (relu, max tie, argmax switch) inside [x-h, x+h] is
    counted as non-smooth instead of failed. The report fails when no coordinate
    was checked or when non-smooth ones exceed GRADCHECK_MAX_NON_SMOOTH_SHARE.
    """
    if h <= 0:
        fail(InvalidArgumentError, EngineErrorMessages.NON_POSITIVE_STEP.value.format(h))
    inputs: List[Tensor] = [inputs] if isinstance(inputs, Tensor) else list(inputs)
    rng = rng if rng is not None else np.random.default_rng(0)

    first, second = _scalar(fn, inputs), _scalar(fn, inputs)
    if first != second:
        fail(NonDeterministicFunctionError, EngineErrorMessages.NON_DETERMINISTIC_FUNCTION.value.format(first, second))

    for tensor in inputs:
        tensor.requires_grad = True
        tensor.zero_grad()
    out = fn(*inputs)
    backward(out)
    analytic = [np.zeros(t.shape) if t.grad is None else t.grad.copy() for t in inputs]

    worst_error, worst_coordinate = 0.0, None
    checked = non_smooth = 0
    for position, tensor in enumerate(inputs):
        flat_count = tensor.values.size
        if max_coordinates is not None and flat_count > max_coordinates:
            coordinates = rng.choice(flat_count, size=max_coordinates, replace=False)
        else:
            coordinates = np.arange(flat_count)
        for flat_index in coordinates:
            index = np.unravel_index(int(flat_index), tensor.shape)
            original = tensor.values[index]

            def f_at(offset: float) -> float:
                tensor.values[index] = original + offset
                try:
                    return _scalar(fn, inputs)
                finally:
                    tensor.values[index] = original

            kink, numeric = _kink(f_at, first, h, tol)
            if kink:
                non_smooth += 1
                continue
            error = relative_error(float(analytic[position][index]), numeric)
            checked += 1
            if error > worst_error or worst_coordinate is None:
                worst_error = max(worst_error, error)
                worst_coordinate = [position] + [int(i) for i in index]

    visited = checked + non_smooth
    max_share = ProjectConfigurations.GRADCHECK_MAX_NON_SMOOTH_SHARE.value
    passed = checked > 0 and worst_error <= tol and non_smooth <= max_share * visited
    if not passed and worst_error <= tol:
        error_logger.error(f"finite_diff_check | too few smooth coordinates | name = {name} | checked = {checked} | non_smooth = {non_smooth}")
    report = GradCheckReport(
        name=name,
        max_relative_error=worst_error,
        tolerance=tol,
        step=h,
        checked_coordinates=checked,
        non_smooth_coordinates=non_smooth,
        worst_coordinate=worst_coordinate,
        passed=passed,
    )
    debug_logger.debug(f"finite_diff_check | name = {name} | max_relative_error = {worst_error:.3e} | checked = {checked} | non_smooth = {non_smooth}")
    return report
