"""
Joint relationship pyramid pooling: six coarse-to-fine joint groupings, each
collapsed to one feature vector per sequence.
"""
from typing import Dict, List

import numpy as np

from app.engine import nn_ops
from app.engine import primitives as P
from app.engine.layers import he_normal
from app.engine.module import Module, Parameter
from app.engine.primitives import fail
from app.engine.tensor import Tensor, as_tensor
from app.models.domain_models.domain_models import SkeletonSpec
from app.utils.error_messages import NetworkErrorMessages
from app.utils.exceptions import ShapeMismatchError
from app.utils.model_variant_enum import SkeletonName

SCALE_COUNT = 6

JointGroups = List[List[int]]

COCO17_SCALES: List[JointGroups] = [
    [list(range(17))],
    [list(range(11)), list(range(11, 17))],
    [[0, 1, 2, 3, 4, 5, 6, 11, 12], [7, 8, 9, 10], [13, 14, 15, 16]],
    [[5, 7, 9], [6, 8, 10], [11, 13, 15], [12, 14, 16]],
    [[0, 1, 2, 3, 4], [5, 7, 9], [6, 8, 10], [11, 13, 15], [12, 14, 16]],
    [[0, 1, 2, 3, 4], [5, 6, 11, 12], [5, 7], [7, 9], [6, 8], [8, 10], [11, 13], [13, 15], [12, 14], [14, 16]],
]

BODY18_SCALES: List[JointGroups] = [
    [list(range(18))],
    [[0, 1, 2, 3, 4, 5, 6, 7, 14, 15, 16, 17], list(range(8, 14))],
    [[0, 1, 2, 5, 8, 11, 14, 15, 16, 17], [3, 4, 6, 7], [9, 10, 12, 13]],
    [[2, 3, 4], [5, 6, 7], [8, 9, 10], [11, 12, 13]],
    [[0, 1, 14, 15, 16, 17], [2, 3, 4], [5, 6, 7], [8, 9, 10], [11, 12, 13]],
    [[0, 14, 15, 16, 17], [1, 2, 5, 8, 11], [2, 3], [3, 4], [5, 6], [6, 7], [8, 9], [9, 10], [11, 12], [12, 13]],
]

SHIPPED_SCALES: Dict[str, List[JointGroups]] = {
    SkeletonName.COCO17.value: COCO17_SCALES,
    SkeletonName.BODY18.value: BODY18_SCALES,
}

def joint_scales(spec: SkeletonSpec) -> List[JointGroups]:
    """
    Shipped skeletons use anatomical groups. Any other skeleton gets the whole
    body followed by 2..6 contiguous chunks of its joint order.
    """
    if spec.name in SHIPPED_SCALES:
        return SHIPPED_SCALES[spec.name]
    joints = np.arange(spec.joint_count)
    scales = [[joints.tolist()]]
    for parts in range(2, SCALE_COUNT + 1):
        scales.append([chunk.tolist() for chunk in np.array_split(joints, parts) if len(chunk)])
    return scales

def scale_pooling_matrix(spec: SkeletonSpec) -> np.ndarray:
    """
    (6, N) matrix whose row s averages the group means of scale s.
    """
    matrix = np.zeros((SCALE_COUNT, spec.joint_count))
    for row, groups in enumerate(joint_scales(spec)):
        for group in groups:
            matrix[row, group] += 1.0 / (len(group) * len(groups))
    return matrix

def jrpp_map(x, pooling: np.ndarray) -> Tensor:
    """
    (.., T, N, C) -> (.., 6, C): temporal mean plus temporal max, then one
    weighted joint average per scale.
    """
    x = as_tensor(x)
    if x.shape[-2] != pooling.shape[1]:
        fail(ShapeMismatchError, NetworkErrorMessages.JOINT_MISMATCH.value.format("jrpp_map", x.shape[-2], pooling.shape[1]))
    aggregated = P.add(nn_ops.temporal_mean(x), nn_ops.temporal_max(x))
    return P.matmul(Tensor(pooling), aggregated)

class JrppHead(Module):
    """
    Pyramid pooling followed by six independent fully connected heads.
    """
    def __init__(self, spec: SkeletonSpec, in_channels: int, head_channels: int, rng: np.random.Generator):
        super().__init__()
        self.pooling = scale_pooling_matrix(spec)
        self.weight = Parameter(he_normal(rng, (SCALE_COUNT, in_channels, head_channels), in_channels))
        self.bias = Parameter(np.zeros((SCALE_COUNT, head_channels)))

    def forward(self, x) -> Tensor:
        pooled = jrpp_map(x, self.pooling)
        lead = pooled.shape[:-2]
        rows = P.reshape(pooled, lead + (SCALE_COUNT, 1, pooled.shape[-1]))
        projected = P.matmul(rows, self.weight)
        return P.add(P.reshape(projected, lead + (SCALE_COUNT, self.weight.shape[-1])), self.bias)
