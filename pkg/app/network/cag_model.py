"""
Gait network assembly: per-stream input BN, embedding block, four graph blocks and
the pyramid heads; an optional bone stream; VATL shared by both streams.
"""
from typing import List, Optional

import numpy as np

from app.engine import primitives as P
from app.engine.layers import BatchNorm
from app.engine.module import Module, ModuleList
from app.engine.primitives import fail
from app.engine.tensor import Tensor, as_tensor
from app.models.class_request_model.config_models import NetworkConfig
from app.models.domain_models.domain_models import ModelOutput, PartitionedAdjacency, SkeletonSpec
from app.network.blocks import CagBlock, GraphConvBlock
from app.network.jrpp import JrppHead
from app.network.skeleton_graph import bone_pairs, partition_adjacency, to_bone_stream
from app.network.vatl import ViewAdaptiveTopologyLearning
from app.utils.error_messages import NetworkErrorMessages
from app.utils.exceptions import ShapeMismatchError
from app.utils.model_variant_enum import ModelVariant

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

class GaitStream(Module):
    def __init__(
        self,
        spec: SkeletonSpec,
        adjacency: PartitionedAdjacency,
        config: NetworkConfig,
        variant: ModelVariant,
        rng: np.random.Generator,
    ):
        super().__init__()
        partitions = adjacency.spatial_partitions
        self.input_norm = BatchNorm((spec.joint_count, config.input_channels), channel_axes=(-2, -1))
        self.embedding = GraphConvBlock(
            config.input_channels,
            config.embedding_channels,
            partitions,
            config.temporal_kernel,
            rng,
            residual=False,
        )
        self.blocks = ModuleList()
        for plan in config.block_plan():
            if variant.uses_jsfl:
                block = CagBlock(plan.in_channels, plan.out_channels, spec.joint_count, config.jsfl, rng, stride=plan.stride)
            else:
                block = GraphConvBlock(plan.in_channels, plan.out_channels, partitions, config.temporal_kernel, rng, stride=plan.stride)
            self.blocks.append(block)
        self.head = JrppHead(spec, config.block_channels[-1], config.head_channels, rng)

    def forward(self, x, topology) -> Tensor:
        features = self.embedding(self.input_norm(x), topology)
        for block in self.blocks:
            features = block(features, topology)
        return self.head(features)

class CagGaitModel(Module):
    """
    model(inputs) -> ModelOutput with embedding (B, 6 | 12, head_channels).

    Rows 0-5 come from the joint stream, rows 6-11 (two-stream only) from the
    bone stream. Variants without VATL run every block on the fixed skeleton graph.
    """
    def __init__(self, config: NetworkConfig, spec: SkeletonSpec, seed: int = 0):
        super().__init__()
        self.config = config
        self.spec = spec
        self.variant = ModelVariant(config.variant)
        rng = np.random.default_rng(seed)
        self.adjacency = partition_adjacency(spec, config.jsfl.spatial_kernels)
        self.pairs = bone_pairs(spec)
        self.vatl: Optional[ViewAdaptiveTopologyLearning] = None
        if self.variant.uses_vatl:
            self.vatl = ViewAdaptiveTopologyLearning(spec, self.adjacency, config, rng)
        self.joint_stream = GaitStream(spec, self.adjacency, config, self.variant, rng)
        self.bone_stream: Optional[GaitStream] = None
        if self.variant.two_stream:
            self.bone_stream = GaitStream(spec, self.adjacency, config, self.variant, rng)
        debug_logger.debug(
            f"CagGaitModel.__init__ | model built | variant = {self.variant.value} | parameters = {self.num_parameters()}"
        )

    def cag_blocks(self) -> List[CagBlock]:
        streams = [self.joint_stream] + ([self.bone_stream] if self.bone_stream is not None else [])
        return [block for stream in streams for block in stream.blocks if isinstance(block, CagBlock)]

    def _validate(self, inputs: np.ndarray) -> np.ndarray:
        if inputs.ndim == 3:
            inputs = inputs[None]
        if inputs.ndim != 4:
            fail(ShapeMismatchError, NetworkErrorMessages.FRAME_MISMATCH.value.format("CagGaitModel", inputs.shape, self.config.frames))
        frames, joints, channels = inputs.shape[-3:]
        if joints != self.spec.joint_count:
            fail(ShapeMismatchError, NetworkErrorMessages.JOINT_MISMATCH.value.format("CagGaitModel", joints, self.spec.joint_count))
        if channels != self.config.input_channels:
            fail(ShapeMismatchError, NetworkErrorMessages.INPUT_CHANNEL_MISMATCH.value.format("CagGaitModel", channels, self.config.input_channels))
        if frames != self.config.frames:
            fail(ShapeMismatchError, NetworkErrorMessages.FRAME_MISMATCH.value.format("CagGaitModel", frames, self.config.frames))
        return inputs

    def forward(self, inputs) -> ModelOutput:
        inputs = self._validate(np.asarray(as_tensor(inputs).values))
        prediction = topology = None
        if self.vatl is not None:
            prediction, topology = self.vatl(inputs)
            graph = topology.g_va
        else:
            graph = self.adjacency.matrices[None]

        embedding = self.joint_stream(Tensor(inputs), graph)
        if self.bone_stream is not None:
            bones = self.bone_stream(Tensor(to_bone_stream(inputs, self.pairs)), graph)
            embedding = P.concat([embedding, bones], axis=-2)
        return ModelOutput(embedding=embedding, view_prediction=prediction, topology=topology)
