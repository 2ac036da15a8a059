"""
View-adaptive topology learning.

A small graph network classifies the view of the root-centred input sequence;
the predicted view selects one of K_V learnable topologies (G_1), the view
probabilities mix all of them (G_2), and the fixed skeleton graph (G_3) is
added back:  G_VA = g1 * G_1 + g2 * G_2 + g3 * G_3.
"""
from typing import Sequence, Tuple

import numpy as np

from app.configs.config import ProjectConfigurations
from app.engine import nn_ops
from app.engine import primitives as P
from app.engine.layers import BatchNorm, Linear
from app.engine.module import Module, Parameter
from app.engine.primitives import fail
from app.engine.tensor import Tensor, as_tensor
from app.models.class_request_model.config_models import NetworkConfig
from app.models.domain_models.domain_models import ComposedTopology, PartitionedAdjacency, SkeletonSpec, ViewPrediction
from app.network.blocks import GraphConvBlock
from app.utils.error_messages import NetworkErrorMessages
from app.utils.exceptions import InvalidArgumentError, ShapeMismatchError

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

def compose_topology(
    prediction: ViewPrediction,
    view_topologies,
    fixed,
    coefficients: Sequence[float] = (0.5, 0.5, 1.0),
) -> ComposedTopology:
    """
    view_topologies: (K_V, K_S, N, N); fixed: (K_S, N, N). Terms with a zero
    coefficient are left out of G_VA and pass no gradient.
    """
    view_topologies = as_tensor(view_topologies)
    view_count = view_topologies.shape[0] if view_topologies.ndim == 4 else 0
    if view_count == 0:
        fail(InvalidArgumentError, NetworkErrorMessages.EMPTY_TOPOLOGY_SET.value)
    view_index = np.asarray(prediction.view_index, dtype=np.int64).reshape(-1)
    for index in view_index:
        if not 0 <= index < view_count:
            fail(InvalidArgumentError, NetworkErrorMessages.VIEW_INDEX_OUT_OF_RANGE.value.format(int(index), view_count))

    slice_shape = view_topologies.shape[1:]
    fixed = Tensor(np.asarray(as_tensor(fixed).values).reshape((1,) + slice_shape))
    probabilities = as_tensor(prediction.probabilities)
    probabilities = P.reshape(probabilities, (-1, view_count))

    selected = P.getitem(view_topologies, view_index)
    flat_set = P.reshape(view_topologies, (view_count, -1))
    mixed = P.reshape(P.matmul(probabilities, flat_set), (probabilities.shape[0],) + slice_shape)

    g1, g2, g3 = (float(g) for g in coefficients)
    terms = [P.mul(g, term) for g, term in ((g1, selected), (g2, mixed), (g3, fixed)) if g != 0.0]
    g_va = terms[0] if terms else P.mul(0.0, fixed)
    for term in terms[1:]:
        g_va = P.add(g_va, term)
    return ComposedTopology(
        g_va=g_va,
        selected=selected,
        mixed=mixed,
        fixed=fixed,
        coefficients=(g1, g2, g3),
    )

def topology_correlation_matrix(view_topologies) -> np.ndarray:
    """
    (K_V, K_V) matrix of mean squared differences between view topologies.
    """
    values = np.asarray(as_tensor(view_topologies).values)
    if values.ndim < 1 or values.shape[0] == 0:
        fail(InvalidArgumentError, NetworkErrorMessages.EMPTY_TOPOLOGY_SET.value)
    flat = values.reshape(values.shape[0], -1)
    differences = flat[:, None, :] - flat[None, :, :]
    return (differences ** 2).mean(axis=-1)

class ViewAdaptiveTopologyLearning(Module):
    def __init__(
        self,
        spec: SkeletonSpec,
        adjacency: PartitionedAdjacency,
        config: NetworkConfig,
        rng: np.random.Generator,
    ):
        super().__init__()
        self.root_joint = spec.root_joint
        self.joint_count = spec.joint_count
        self.input_channels = config.input_channels
        self.coefficients: Tuple[float, float, float] = config.effective_coefficients
        self.fixed = adjacency.matrices
        self.input_norm = BatchNorm((spec.joint_count, config.input_channels), channel_axes=(-2, -1))
        self.embedding = GraphConvBlock(
            config.input_channels,
            config.vatl_embedding_channels,
            adjacency.spatial_partitions,
            config.vatl_temporal_kernel,
            rng,
            residual=False,
        )
        self.classifier = Linear(config.vatl_embedding_channels, config.view_count, rng)
        noise = ProjectConfigurations.VIEW_TOPOLOGY_INIT_NOISE.value
        initial = self.fixed[None] + rng.uniform(-noise, noise, size=(config.view_count,) + self.fixed.shape)
        self.view_topologies = Parameter(initial)

    def predict_view(self, x) -> ViewPrediction:
        """
        (B, T, N, C_in) raw coordinates -> view logits, probabilities and argmax index.
        """
        x = as_tensor(x)
        if x.shape[-2] != self.joint_count:
            fail(ShapeMismatchError, NetworkErrorMessages.JOINT_MISMATCH.value.format("predict_view", x.shape[-2], self.joint_count))
        root = x.values[..., self.root_joint:self.root_joint + 1, :]
        centred = Tensor(x.values - root)
        features = self.embedding(self.input_norm(centred), self.fixed[None])
        logits = self.classifier(nn_ops.global_average(features))
        return ViewPrediction(
            logits=logits,
            probabilities=nn_ops.softmax(logits, axis=-1),
            view_index=np.argmax(logits.values, axis=-1),
        )

    def compose_topology(self, prediction: ViewPrediction) -> ComposedTopology:
        return compose_topology(prediction, self.view_topologies, self.fixed, self.coefficients)

    def correlation_matrix(self) -> np.ndarray:
        return topology_correlation_matrix(self.view_topologies)

    def forward(self, x) -> Tuple[ViewPrediction, ComposedTopology]:
        prediction = self.predict_view(x)
        return prediction, self.compose_topology(prediction)
