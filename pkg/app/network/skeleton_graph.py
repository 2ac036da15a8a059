"""
Skeleton conventions, adjacency partitioning and bone pairs.

Joint orders:
  coco17 - COCO keypoint order (nose, eyes, ears, shoulders, elbows, wrists,
           hips, knees, ankles; left before right). COCO has no neck joint, so
           the nose carries both shoulders and acts as the upper-body hub and root.
  body18 - OpenPose BODY18 order (nose, neck, right arm, left arm, right leg,
           left leg, eyes, ears); rooted at the neck.
"""
from collections import deque
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.models.class_request_model.config_models import CustomSkeletonDefinition
from app.models.domain_models.domain_models import PartitionedAdjacency, SkeletonSpec
from app.utils.error_messages import SkeletonErrorMessages
from app.utils.exceptions import SkeletonError
from app.utils.model_variant_enum import SkeletonName

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

COCO17_NAMES = (
    "nose", "left_eye", "right_eye", "left_ear", "right_ear",
    "left_shoulder", "right_shoulder", "left_elbow", "right_elbow",
    "left_wrist", "right_wrist", "left_hip", "right_hip",
    "left_knee", "right_knee", "left_ankle", "right_ankle",
)
COCO17_EDGES = (
    (0, 1), (0, 2), (1, 3), (2, 4),
    (0, 5), (0, 6), (5, 7), (7, 9), (6, 8), (8, 10),
    (5, 11), (6, 12), (11, 13), (13, 15), (12, 14), (14, 16),
)

BODY18_NAMES = (
    "nose", "neck", "right_shoulder", "right_elbow", "right_wrist",
    "left_shoulder", "left_elbow", "left_wrist", "right_hip", "right_knee",
    "right_ankle", "left_hip", "left_knee", "left_ankle",
    "right_eye", "left_eye", "right_ear", "left_ear",
)
BODY18_EDGES = (
    (1, 0), (1, 2), (2, 3), (3, 4), (1, 5), (5, 6), (6, 7),
    (1, 8), (8, 9), (9, 10), (1, 11), (11, 12), (12, 13),
    (0, 14), (0, 15), (14, 16), (15, 17),
)

SHIPPED_SKELETONS: Dict[str, Tuple[Tuple[str, ...], Tuple[Tuple[int, int], ...], int]] = {
    SkeletonName.COCO17.value: (COCO17_NAMES, COCO17_EDGES, 0),
    SkeletonName.BODY18.value: (BODY18_NAMES, BODY18_EDGES, 1),
}

def _reject(message: str):
    error_logger.error(f"skeleton_graph | {message}")
    raise SkeletonError(message)

def _validate(joint_count: int, edges: Sequence[Tuple[int, int]], root: int) -> None:
    if joint_count < 1:
        _reject(SkeletonErrorMessages.JOINT_COUNT_NOT_POSITIVE.value.format(joint_count))
    if not 0 <= root < joint_count:
        _reject(SkeletonErrorMessages.ROOT_OUT_OF_RANGE.value.format(root, joint_count))
    for i, j in edges:
        if not (0 <= i < joint_count and 0 <= j < joint_count):
            _reject(SkeletonErrorMessages.EDGE_OUT_OF_RANGE.value.format(i, j, joint_count))
        if i == j:
            _reject(SkeletonErrorMessages.SELF_LOOP.value.format(i, j))
    reached = set(_bfs(joint_count, edges, root)[0])
    unreachable = sorted(set(range(joint_count)) - reached)
    if unreachable:
        _reject(SkeletonErrorMessages.DISCONNECTED.value.format(unreachable))

def _bfs(joint_count: int, edges: Sequence[Tuple[int, int]], root: int) -> Tuple[Dict[int, int], Dict[int, int]]:
    """
    Returns (hop distance, parent) maps of every joint reachable from root.
    """
    neighbours: List[List[int]] = [[] for _ in range(joint_count)]
    for i, j in edges:
        neighbours[i].append(j)
        neighbours[j].append(i)
    hops, parents = {root: 0}, {root: root}
    queue = deque([root])
    while queue:
        joint = queue.popleft()
        for other in sorted(neighbours[joint]):
            if other not in hops:
                hops[other] = hops[joint] + 1
                parents[other] = joint
                queue.append(other)
    return hops, parents

def build_skeleton(name: str, custom: Optional[CustomSkeletonDefinition] = None) -> SkeletonSpec:
    """
    Returns the canonical spec of a shipped convention, or validates a custom edge list.
    """
    name = name.value if isinstance(name, SkeletonName) else str(name)
    if name in SHIPPED_SKELETONS:
        names, edges, root = SHIPPED_SKELETONS[name]
        return SkeletonSpec(name=name, joint_count=len(names), edges=edges, root_joint=root, joint_names=names)
    if name != SkeletonName.CUSTOM.value:
        _reject(SkeletonErrorMessages.UNKNOWN_SKELETON.value.format(name, [s.value for s in SkeletonName]))
    if custom is None:
        _reject(SkeletonErrorMessages.CUSTOM_EDGES_REQUIRED.value)

    edges = tuple(sorted({tuple(sorted((int(i), int(j)))) for i, j in custom.edges}))
    _validate(custom.joint_count, edges, custom.root)
    names = tuple(custom.names) if custom.names else tuple(f"joint{i}" for i in range(custom.joint_count))
    if len(names) != custom.joint_count:
        _reject(SkeletonErrorMessages.NAME_COUNT_MISMATCH.value.format(custom.joint_count, len(names)))
    spec = SkeletonSpec(name=name, joint_count=custom.joint_count, edges=edges, root_joint=custom.root, joint_names=names)
    debug_logger.debug(f"build_skeleton | custom skeleton built | joint_count = {spec.joint_count} | edges = {len(edges)}")
    return spec

def adjacency_matrix(spec: SkeletonSpec) -> np.ndarray:
    matrix = np.zeros((spec.joint_count, spec.joint_count))
    for i, j in spec.edges:
        matrix[i, j] = matrix[j, i] = 1.0
    return matrix

def hop_distances(spec: SkeletonSpec) -> np.ndarray:
    hops, _ = _bfs(spec.joint_count, spec.edges, spec.root_joint)
    return np.array([hops[j] for j in range(spec.joint_count)])

def normalized_adjacency(spec: SkeletonSpec) -> np.ndarray:
    """
    D^-1/2 (A + I) D^-1/2 with D the degree matrix of A + I.
    """
    with_self = adjacency_matrix(spec) + np.eye(spec.joint_count)
    inv_sqrt_degree = 1.0 / np.sqrt(with_self.sum(axis=1))
    return with_self * inv_sqrt_degree[:, None] * inv_sqrt_degree[None, :]

def partition_adjacency(spec: SkeletonSpec, spatial_partitions: int) -> PartitionedAdjacency:
    """
    K_S = 1: the whole normalized graph.
    K_S = 3: row i (the aggregating joint) is split into neighbours at the same hop
    distance from the root as i (itself included), neighbours closer to the root,
    and neighbours farther from it.
    """
    if spatial_partitions not in (1, 3):
        _reject(SkeletonErrorMessages.UNSUPPORTED_PARTITION.value.format(spatial_partitions))
    normalized = normalized_adjacency(spec)
    if spatial_partitions == 1:
        return PartitionedAdjacency(matrices=normalized[None, :, :], spatial_partitions=1)

    hops = hop_distances(spec)
    centre, neighbour = hops[:, None], hops[None, :]
    masks = (neighbour == centre, neighbour < centre, neighbour > centre)
    matrices = np.stack([np.where(mask, normalized, 0.0) for mask in masks])
    return PartitionedAdjacency(matrices=matrices, spatial_partitions=3)

def bone_pairs(spec: SkeletonSpec) -> List[Tuple[int, int]]:
    """
    (child, parent) for every joint in index order; the root is its own parent.
    """
    _, parents = _bfs(spec.joint_count, spec.edges, spec.root_joint)
    return [(joint, parents[joint]) for joint in range(spec.joint_count)]

def to_bone_stream(frames: np.ndarray, pairs: Sequence[Tuple[int, int]]) -> np.ndarray:
    """
    out[..., child, :] = frames[..., child, :] - frames[..., parent, :]; the root row is zero.
    """
    frames = np.asarray(frames, dtype=np.float64)
    children = np.array([child for child, _ in pairs])
    parents = np.array([parent for _, parent in pairs])
    bones = np.zeros_like(frames)
    bones[..., children, :] = frames[..., children, :] - frames[..., parents, :]
    return bones
