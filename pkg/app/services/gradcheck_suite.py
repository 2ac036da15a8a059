"""
Finite-difference suite over every differentiable operator, the graph
operators built on them, the objectives and one full tiny network.

Every tensor-valued operator is checked through sum(op(inputs) * W) with a
fixed random W, so all output coordinates contribute to the gradient.
"""
from typing import Callable, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

# import configurations
from app.configs.config import ProjectConfigurations
from app.configs.network_profiles import tiny_profile

# import models
from app.models.class_request_model.config_models import LossConfig
from app.models.class_return_model.services_class_response_models import GradCheckReport, ServiceClassResponse
from app.models.domain_models.domain_models import GeneratedFilters, ViewPrediction

# import engine
from app.engine import nn_ops
from app.engine import primitives as P
from app.engine.gradcheck import finite_diff_check
from app.engine.layers import BatchNorm
from app.engine.tensor import Tensor, no_grad

# import network
from app.network.blocks import aggregate, cag_block_forward
from app.network.jrpp import jrpp_map, scale_pooling_matrix
from app.network.objectives import circle_loss, total_loss, triplet_loss, view_ce_loss
from app.network.vatl import compose_topology

# import services
from app.services.model_factory import ModelFactoryService

# import messages
from app.utils.error_messages import CommandErrorMessages
from app.utils.success_messages import DiagnosticsSuccessMessages

# import exceptions
from app.utils.exceptions import CagError

# import exit codes
from app.utils.exit_codes import ExitCodes, exit_code_for

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

GRADCHECK_CIRCLE_SCALE = 4.0
NETWORK_COORDINATES_PER_TENSOR = 3

class GradCase(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str
    fn: Callable[..., Tensor]
    inputs: List[Tensor]
    max_coordinates: Optional[int] = None

def weighted(op: Callable[..., Tensor], inputs: Sequence[Tensor], rng: np.random.Generator) -> Callable[..., Tensor]:
    """
    sum(op(*inputs) * W) for a fixed W drawn once from rng.
    """
    with no_grad():
        shape = op(*inputs).shape
    weights = Tensor(rng.normal(size=shape))
    return lambda *args: P.sum(P.mul(op(*args), weights))

def _case(name: str, op: Callable[..., Tensor], inputs: Sequence[np.ndarray], rng: np.random.Generator) -> GradCase:
    tensors = [Tensor(np.array(value, dtype=np.float64)) for value in inputs]
    return GradCase(name=name, fn=weighted(op, tensors, rng), inputs=tensors)

def primitive_cases(rng: np.random.Generator) -> List[GradCase]:
    normal = lambda *shape: rng.normal(size=shape)
    positive = lambda *shape: rng.uniform(0.5, 2.0, size=shape)
    return [
        _case("add", P.add, [normal(3, 4), normal(4)], rng),
        _case("sub", P.sub, [normal(3, 1), normal(1, 4)], rng),
        _case("mul", P.mul, [normal(2, 3), normal(2, 3)], rng),
        _case("div", P.div, [normal(2, 3), positive(2, 3)], rng),
        _case("neg", P.neg, [normal(5)], rng),
        _case("power", lambda a: P.power(a, 3.0), [normal(2, 3)], rng),
        _case("exp", P.exp, [normal(2, 3)], rng),
        _case("log", P.log, [positive(2, 3)], rng),
        _case("sqrt", P.sqrt, [positive(2, 3)], rng),
        _case("clamp_min", lambda a: P.clamp_min(a, 0.1), [rng.choice([-1.0, 1.0], size=(2, 3)) * positive(2, 3)], rng),
        _case("matmul", P.matmul, [normal(2, 3, 4), normal(4, 5)], rng),
        _case("sum", lambda a: P.sum(a, axis=(0, 2), keepdims=True), [normal(2, 3, 4)], rng),
        _case("mean", lambda a: P.mean(a, axis=1), [normal(2, 3, 4)], rng),
        _case("max", lambda a: P.max(a, axis=-1), [normal(3, 5)], rng),
        _case("reshape", lambda a: P.reshape(a, (6, -1)), [normal(2, 3, 4)], rng),
        _case("transpose", lambda a: P.transpose(a, (2, 0, 1)), [normal(2, 3, 4)], rng),
        _case("swapaxes", lambda a: P.swapaxes(a, 0, -1), [normal(2, 3, 4)], rng),
        _case("broadcast_to", lambda a: P.broadcast_to(a, (3, 2, 4)), [normal(2, 1)], rng),
        _case("getitem", lambda a: P.getitem(a, (np.array([0, 2, 2]), np.array([1, 0, 1]))), [normal(3, 2)], rng),
        _case("concat", lambda a, b: P.concat([a, b], axis=1), [normal(2, 3), normal(2, 2)], rng),
        _case("stack", lambda a, b: P.stack([a, b], axis=-1), [normal(2, 3), normal(2, 3)], rng),
    ]

def operator_cases(rng: np.random.Generator) -> List[GradCase]:
    normal = lambda *shape: rng.normal(size=shape)
    bn_gamma, bn_beta = rng.uniform(0.5, 1.5, size=3), normal(3)

    def batch_norm(x, gamma, beta):
        return nn_ops.batch_norm(x, gamma, beta, None, None, channel_axes=(-1,), training=True, eps=1e-5, momentum=0.1)

    return [
        _case("conv1x1", nn_ops.conv1x1, [normal(2, 5, 3, 4), normal(4, 6)], rng),
        _case("fully_connected", nn_ops.fully_connected, [normal(3, 4), normal(4, 2), normal(2)], rng),
        _case("depthwise_joint_scale", nn_ops.depthwise_joint_scale, [normal(2, 3, 5, 4, 3), normal(2, 3, 4, 3)], rng),
        _case("depthwise_joint_scale_shared", nn_ops.depthwise_joint_scale, [normal(2, 5, 4, 3), normal(2, 1, 3)], rng),
        _case("depthwise_temporal_conv", nn_ops.depthwise_temporal_conv, [normal(2, 7, 4, 3), normal(2, 3, 4, 3)], rng),
        _case("depthwise_temporal_conv_stride2", lambda x, f: nn_ops.depthwise_temporal_conv(x, f, stride=2), [normal(2, 7, 4, 3), normal(2, 5, 4, 3)], rng),
        _case("temporal_conv", nn_ops.temporal_conv, [normal(2, 6, 3, 2), normal(3, 2, 4)], rng),
        _case("temporal_conv_stride2", lambda x, w: nn_ops.temporal_conv(x, w, stride=2), [normal(2, 7, 3, 2), normal(3, 2, 4)], rng),
        _case("batch_norm", batch_norm, [10.0 * normal(4, 5, 3), bn_gamma, bn_beta], rng),
        _case("relu", nn_ops.relu, [normal(3, 4)], rng),
        _case("softmax", lambda x: nn_ops.softmax(x, axis=-1), [normal(3, 4)], rng),
        _case("log_softmax", lambda x: nn_ops.log_softmax(x, axis=-1), [normal(3, 4)], rng),
        _case("logsumexp", lambda x: nn_ops.logsumexp(x, axis=0), [normal(3, 4)], rng),
        _case("softplus", nn_ops.softplus, [normal(3, 4)], rng),
        _case("cross_entropy", lambda x: nn_ops.cross_entropy(x, np.array([0, 2, 1])), [normal(3, 4)], rng),
        _case("adaptive_temporal_pool", lambda x: nn_ops.adaptive_temporal_pool(x, 3), [normal(2, 7, 3, 2)], rng),
        _case("temporal_mean", nn_ops.temporal_mean, [normal(2, 5, 3, 2)], rng),
        _case("temporal_max", nn_ops.temporal_max, [normal(2, 5, 3, 2)], rng),
        _case("global_average", nn_ops.global_average, [normal(2, 5, 3, 2)], rng),
    ]

def graph_cases(rng: np.random.Generator) -> List[GradCase]:
    spec = ModelFactoryService().resolve_skeleton(tiny_profile())
    joints, kernels = spec.joint_count, 3
    normal = lambda *shape: rng.normal(size=shape)
    pooling = scale_pooling_matrix(spec)

    def topology_mix(logits, view_set):
        probabilities = nn_ops.softmax(logits, axis=-1)
        prediction = ViewPrediction(logits=logits, probabilities=probabilities, view_index=np.argmax(logits.values, axis=-1))
        return compose_topology(prediction, view_set, np.eye(joints)[None].repeat(kernels, axis=0)).g_va

    norm_in, norm_out = BatchNorm((4,), channel_axes=(-1,)), BatchNorm((4,), channel_axes=(-1,))

    def cag(x, topology, f_s, f_t, w1, w2):
        filters = GeneratedFilters(spatial=f_s, temporal=f_t)
        return cag_block_forward(x, topology, filters, w1, w2, stride=2, norm_in=norm_in, norm_out=norm_out)

    embeddings, labels = normal(6, 2, 3), np.array([0, 0, 1, 1, 2, 2])
    return [
        _case("aggregate", aggregate, [normal(2, 4, joints, 3), normal(2, kernels, joints, joints)], rng),
        _case("compose_topology", topology_mix, [normal(2, 4), normal(4, kernels, joints, joints)], rng),
        _case("jrpp_map", lambda x: jrpp_map(x, pooling), [normal(2, 6, joints, 3)], rng),
        _case("cag_block", cag, [
            normal(2, 6, joints, 3),
            normal(2, kernels, joints, joints),
            normal(2, kernels, joints, 3),
            normal(2, 3, joints, 4),
            normal(3, 4),
            normal(4, 4),
        ], rng),
        GradCase(name="triplet_loss", fn=lambda e: triplet_loss(e, labels, margin=0.5), inputs=[Tensor(embeddings.copy())]),
        GradCase(name="circle_loss", fn=lambda e: circle_loss(e, labels, scale=GRADCHECK_CIRCLE_SCALE), inputs=[Tensor(embeddings.copy())]),
        GradCase(name="view_ce_loss", fn=lambda z: view_ce_loss(z, np.array([0, 1, 2, 0])), inputs=[Tensor(normal(4, 3))]),
    ]

def network_case(seed: int = 0) -> GradCase:
    """
    Loss of the tiny two-stream network against its own parameters, batch of
    two subjects with two sequences each.
    """
    rng = np.random.default_rng([seed, 7])
    config = tiny_profile()
    model = ModelFactoryService().build_model(config, seed=seed)
    model.train()
    inputs = rng.normal(size=(4, config.frames, 5, config.input_channels))
    subjects, views = np.array([0, 0, 1, 1]), np.array([0, 1, 2, 0])
    loss_config = LossConfig(circle_scale=GRADCHECK_CIRCLE_SCALE)

    def loss(*_params):
        output = model(inputs)
        parts = {
            "triplet": triplet_loss(output.embedding, subjects, margin=loss_config.triplet_margin),
            "circle": circle_loss(output.embedding, subjects, margin=loss_config.circle_margin, scale=loss_config.circle_scale),
            "view_ce": view_ce_loss(output.view_prediction.logits, views),
        }
        return total_loss(parts, loss_config)

    return GradCase(name="tiny_cag_network", fn=loss, inputs=model.parameters(), max_coordinates=NETWORK_COORDINATES_PER_TENSOR)

class GradcheckService:
    def __init__(self, tol: float = ProjectConfigurations.GRADCHECK_TOLERANCE.value, h: float = ProjectConfigurations.GRADCHECK_STEP.value, seed: int = 0):
        self.tol = tol
        self.h = h
        self.seed = seed

    def cases(self, include_network: bool = True) -> List[GradCase]:
        rng = np.random.default_rng(self.seed)
        cases = primitive_cases(rng) + operator_cases(rng) + graph_cases(rng)
        if include_network:
            cases.append(network_case(self.seed))
        return cases

    def check(self, case: GradCase) -> GradCheckReport:
        return finite_diff_check(
            case.fn,
            case.inputs,
            h=self.h,
            tol=self.tol,
            name=case.name,
            max_coordinates=case.max_coordinates,
            rng=np.random.default_rng(self.seed),
        )

    def run(self, include_network: bool = True) -> ServiceClassResponse:
        try:
            reports = [self.check(case) for case in self.cases(include_network)]
        except CagError as e:
            error_logger.error(f"GradcheckService.run | {e.message}")
            return ServiceClassResponse(status=False, status_code=exit_code_for(e), message=e.message)
        failed = [report.name for report in reports if not report.passed]
        if failed:
            message = CommandErrorMessages.GRADCHECK_FAILED.value.format(", ".join(failed))
            error_logger.error(f"GradcheckService.run | {message}")
            return ServiceClassResponse(status=False, status_code=ExitCodes.GRADCHECK_FAILED.value, message=message, data={"reports": reports})
        info_logger.info(f"GradcheckService.run | {DiagnosticsSuccessMessages.GRADCHECK_PASSED.value} | cases = {len(reports)} | tol = {self.tol}")
        return ServiceClassResponse(
            status=True,
            status_code=ExitCodes.SUCCESS.value,
            message=DiagnosticsSuccessMessages.GRADCHECK_PASSED.value,
            data={"reports": reports},
        )
