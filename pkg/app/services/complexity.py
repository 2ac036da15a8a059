"""
Parameter counts and an analytic multiply-accumulate model of the network.

MACs are counted for every channel-mixing, aggregation and filtering product;
normalization, activations, additions and pooling are not counted.
"""
from typing import List, Optional, Sequence

# import models
from app.models.class_request_model.config_models import BlockPlan, NetworkConfig
from app.models.class_return_model.services_class_response_models import ComplexityRow, FlopTerm, ServiceClassResponse

# import network
from app.network.jrpp import SCALE_COUNT
from app.network.jsfl import CONTEXT_KERNEL

# import services
from app.services.model_factory import ModelFactoryService

# import messages
from app.utils.success_messages import DiagnosticsSuccessMessages

# import exceptions
from app.utils.exceptions import CagError

# import exit codes
from app.utils.exit_codes import ExitCodes, exit_code_for

# import enums
from app.utils.model_variant_enum import FilterMode, ModelVariant

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

def _term(module: str, operation: str, macs: int, temporal_linear: bool) -> FlopTerm:
    return FlopTerm(module=module, operation=operation, macs=int(macs), temporal_linear=temporal_linear)

def dense_block_terms(module: str, c_in: int, c_out: int, joints: int, partitions: int, kernel: int, t_in: int, t_out: int, residual: bool) -> List[FlopTerm]:
    terms = [
        _term(module, "aggregation", partitions * t_in * joints * joints * c_in, True),
        _term(module, "spatial_weight", partitions * t_in * joints * c_in * c_out, True),
        _term(module, "temporal_conv", t_out * joints * kernel * c_out * c_out, True),
    ]
    if residual and c_in != c_out:
        terms.append(_term(module, "shortcut", t_out * joints * c_in * c_out, True))
    return terms

def cag_block_terms(module: str, plan: BlockPlan, joints: int, config: NetworkConfig) -> List[FlopTerm]:
    jsfl = config.jsfl
    c, c_out, t_in, t_out = plan.in_channels, plan.out_channels, plan.in_frames, plan.out_frames
    pooled, inflated = jsfl.pooled_length, jsfl.inflation_ratio * jsfl.pooled_length
    reduced, kernels, k_t = c // jsfl.reduction_ratio, jsfl.spatial_kernels, jsfl.temporal_kernel

    terms: List[FlopTerm] = []
    if jsfl.filter_mode is not FilterMode.STATIC:
        # global filters are generated once per sequence instead of once per joint
        n = 1 if jsfl.filter_mode is FilterMode.GLOBAL else joints
        terms += [
            _term(module, "spatial_context", pooled * n * CONTEXT_KERNEL * c, False),
            _term(module, "spatial_reduce", n * c * reduced, False),
            _term(module, "spatial_expand", n * reduced * kernels * c, False),
            _term(module, "temporal_context", pooled * n * CONTEXT_KERNEL * c * c_out, False),
            _term(module, "temporal_inflate", n * c_out * pooled * inflated, False),
            _term(module, "temporal_shrink", n * c_out * inflated * k_t, False),
        ]
    terms += [
        _term(module, "joint_scale", kernels * t_in * joints * c, True),
        _term(module, "aggregation", kernels * t_in * joints * joints * c, True),
        _term(module, "mix_in", t_in * joints * c * c_out, True),
        _term(module, "depthwise_temporal", t_out * joints * k_t * c_out, True),
        _term(module, "mix_out", t_out * joints * c_out * c_out, True),
    ]
    if c != c_out:
        terms.append(_term(module, "shortcut", t_out * joints * c * c_out, True))
    return terms

def vatl_terms(config: NetworkConfig, joints: int, frames: int) -> List[FlopTerm]:
    partitions = config.jsfl.spatial_kernels
    terms = dense_block_terms(
        "vatl.embedding", config.input_channels, config.vatl_embedding_channels, joints, partitions, config.vatl_temporal_kernel, frames, frames, False
    )
    terms.append(_term("vatl", "view_classifier", config.vatl_embedding_channels * config.view_count, False))
    terms.append(_term("vatl", "topology_mixture", config.view_count * partitions * joints * joints, False))
    return terms

def stream_terms(prefix: str, config: NetworkConfig, variant: ModelVariant, joints: int, frames: int) -> List[FlopTerm]:
    partitions = config.jsfl.spatial_kernels
    terms = dense_block_terms(
        f"{prefix}.embedding", config.input_channels, config.embedding_channels, joints, partitions, config.temporal_kernel, frames, frames, False
    )
    for plan in config.block_plan(frames):
        module = f"{prefix}.blocks.{plan.index}"
        if variant.uses_jsfl:
            terms += cag_block_terms(module, plan, joints, config)
        else:
            terms += dense_block_terms(
                module, plan.in_channels, plan.out_channels, joints, partitions, config.temporal_kernel, plan.in_frames, plan.out_frames, True
            )
    terms.append(_term(f"{prefix}.head", "scale_heads", SCALE_COUNT * config.block_channels[-1] * config.head_channels, False))
    return terms

def flop_terms(config: NetworkConfig, joints: int, frames: Optional[int] = None, variant: Optional[ModelVariant] = None) -> List[FlopTerm]:
    frames = config.frames if frames is None else frames
    variant = ModelVariant(variant or config.variant)
    terms: List[FlopTerm] = []
    if variant.uses_vatl:
        terms += vatl_terms(config, joints, frames)
    terms += stream_terms("joint_stream", config, variant, joints, frames)
    if variant.two_stream:
        terms += stream_terms("bone_stream", config, variant, joints, frames)
    return terms

def estimate_flops(config: NetworkConfig, joints: int, frames: Optional[int] = None, variant: Optional[ModelVariant] = None, flops_per_mac: int = 1) -> int:
    return flops_per_mac * sum(term.macs for term in flop_terms(config, joints, frames, variant))

class ComplexityService:
    def __init__(self, config: NetworkConfig):
        self.config = config
        self.factory = ModelFactoryService()

    def count_params(self, variant: Optional[ModelVariant] = None) -> int:
        variant = ModelVariant(variant or self.config.variant)
        model = self.factory.build_model(self.config.model_copy(update={"variant": variant}))
        return model.num_parameters()

    def complexity_table(
        self,
        variants: Sequence[ModelVariant] = tuple(ModelVariant),
        frames: Optional[int] = None,
        flops_per_mac: int = 1,
    ) -> ServiceClassResponse:
        try:
            joints = self.factory.resolve_skeleton(self.config).joint_count
            rows = []
            for variant in variants:
                variant = ModelVariant(variant)
                flops = estimate_flops(self.config, joints, frames, variant, flops_per_mac)
                rows.append(ComplexityRow(
                    variant=variant.value,
                    parameters=self.count_params(variant),
                    macs=flops // flops_per_mac,
                    gflops=flops / 1e9,
                ))
                debug_logger.debug(f"ComplexityService.complexity_table | row = {rows[-1].model_dump()}")
            info_logger.info(f"ComplexityService.complexity_table | {DiagnosticsSuccessMessages.COMPLEXITY_COMPUTED.value} | profile = {self.config.profile} | rows = {len(rows)}")
            return ServiceClassResponse(
                status=True,
                status_code=ExitCodes.SUCCESS.value,
                message=DiagnosticsSuccessMessages.COMPLEXITY_COMPUTED.value,
                data={"rows": rows},
            )
        except CagError as e:
            error_logger.error(f"ComplexityService.complexity_table | {e.message}")
            return ServiceClassResponse(status=False, status_code=exit_code_for(e), message=e.message)
