"""
Recognition objectives: batch-all triplet loss per embedding row, circle loss on
cosine similarities of the flattened embeddings, view cross-entropy, and their
weighted sum.
"""
from typing import Dict, Tuple, Union

import numpy as np

from app.configs.config import ProjectConfigurations
from app.engine import nn_ops
from app.engine import primitives as P
from app.engine.primitives import fail
from app.engine.tensor import Tensor, as_tensor
from app.models.class_request_model.config_models import LossConfig
from app.utils.error_messages import ObjectiveErrorMessages
from app.utils.exceptions import InvalidArgumentError, NonFiniteLossError, ShapeMismatchError

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

LOSS_PARTS = ("triplet", "circle", "view_ce")
DEGENERATE_LOSS = "degenerate"

def _labels(embeddings: Tensor, labels, op: str) -> np.ndarray:
    labels = np.asarray(labels).reshape(-1)
    if labels.shape[0] != embeddings.shape[0]:
        fail(ShapeMismatchError, ObjectiveErrorMessages.BATCH_SIZE_MISMATCH.value.format(op, embeddings.shape[0], labels.shape[0]))
    return labels

def valid_triplets(labels) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Index arrays (anchor, positive, negative) of every valid triplet, anchor != positive.
    """
    labels = np.asarray(labels).reshape(-1)
    same = labels[:, None] == labels[None, :]
    positive = same & ~np.eye(labels.shape[0], dtype=bool)
    mask = positive[:, :, None] & ~same[:, None, :]
    return np.nonzero(mask)

def count_valid_triplets(labels) -> int:
    return int(valid_triplets(labels)[0].shape[0])

def _degenerate(op: str, labels: np.ndarray) -> Tensor:
    info_logger.warning(ObjectiveErrorMessages.DEGENERATE_BATCH.value.format(op, labels.tolist()))
    return Tensor(0.0, name=DEGENERATE_LOSS)

def is_degenerate(loss) -> bool:
    """
    True for the zero a loss returns when its batch has no valid pair or triplet.
    """
    return isinstance(loss, Tensor) and loss.name == DEGENERATE_LOSS

def pairwise_distances(embeddings) -> Tensor:
    """
    (B, R, D) -> (B, B, R) Euclidean distances per row; squared distances are
    floored before the square root.
    """
    embeddings = as_tensor(embeddings)
    batch = embeddings.shape[0]
    left = P.reshape(embeddings, (batch, 1) + embeddings.shape[1:])
    right = P.reshape(embeddings, (1, batch) + embeddings.shape[1:])
    difference = P.sub(left, right)
    squared = P.sum(P.mul(difference, difference), axis=-1)
    return P.sqrt(P.clamp_min(squared, ProjectConfigurations.TRIPLET_DISTANCE_FLOOR.value))

def triplet_loss(embeddings, labels, margin: float = 0.2) -> Tensor:
    """
    Mean of max(0, d_ap - d_an + margin) over every valid triplet and every
    embedding row. A batch with no valid triplet yields 0.
    """
    embeddings = as_tensor(embeddings)
    if embeddings.ndim == 2:
        embeddings = P.reshape(embeddings, embeddings.shape[:1] + (1,) + embeddings.shape[1:])
    labels = _labels(embeddings, labels, "triplet_loss")
    anchor, positive, negative = valid_triplets(labels)
    if anchor.shape[0] == 0:
        return _degenerate("triplet_loss", labels)
    distances = pairwise_distances(embeddings)
    d_ap = P.getitem(distances, (anchor, positive))
    d_an = P.getitem(distances, (anchor, negative))
    return P.mean(nn_ops.relu(P.add(P.sub(d_ap, d_an), margin)))

def cosine_similarity_matrix(embeddings) -> Tensor:
    embeddings = as_tensor(embeddings)
    flat = P.reshape(embeddings, (embeddings.shape[0], -1))
    norms = P.sqrt(P.clamp_min(P.sum(P.mul(flat, flat), axis=-1, keepdims=True), ProjectConfigurations.COSINE_NORM_FLOOR.value))
    unit = P.div(flat, norms)
    return P.matmul(unit, P.transpose(unit))

def circle_loss(
    embeddings,
    labels,
    margin: float = 0.5,
    scale: float = 64.0,
    detach_weights: bool = False,
) -> Tensor:
    """
    log(1 + sum_n exp(scale * a_n * (s_n - m)) * sum_p exp(-scale * a_p * (s_p - 1 + m)))
    with a_p = relu(1 + m - s_p) and a_n = relu(s_n + m), over the unordered pairs of the batch.
    """
    embeddings = as_tensor(embeddings)
    labels = _labels(embeddings, labels, "circle_loss")
    upper_i, upper_j = np.triu_indices(labels.shape[0], k=1)
    same = labels[upper_i] == labels[upper_j]
    if not same.any() or same.all():
        return _degenerate("circle_loss", labels)

    similarity = cosine_similarity_matrix(embeddings)
    s_p = P.getitem(similarity, (upper_i[same], upper_j[same]))
    s_n = P.getitem(similarity, (upper_i[~same], upper_j[~same]))
    alpha_p = nn_ops.relu(P.sub(1.0 + margin, s_p))
    alpha_n = nn_ops.relu(P.add(s_n, margin))
    if detach_weights:
        alpha_p, alpha_n = P.detach(alpha_p), P.detach(alpha_n)
    logits_p = P.mul(-scale, P.mul(alpha_p, P.sub(s_p, 1.0 - margin)))
    logits_n = P.mul(scale, P.mul(alpha_n, P.sub(s_n, margin)))
    return nn_ops.softplus(P.add(nn_ops.logsumexp(logits_n), nn_ops.logsumexp(logits_p)))

def view_ce_loss(logits, view_labels) -> Tensor:
    logits = as_tensor(logits)
    view_labels = np.asarray(view_labels, dtype=np.int64).reshape(-1)
    view_count = logits.shape[-1]
    for label in view_labels:
        if not 0 <= label < view_count:
            fail(InvalidArgumentError, ObjectiveErrorMessages.VIEW_LABEL_OUT_OF_RANGE.value.format(int(label), view_count))
    return nn_ops.cross_entropy(P.reshape(logits, (-1, view_count)), view_labels)

def total_loss(parts: Dict[str, Union[Tensor, float]], config: LossConfig) -> Tensor:
    """
    triplet_weight * triplet + circle_weight * circle + view_weight * view_ce.
    Missing parts count as 0.
    """
    weights = {
        "triplet": config.triplet_weight,
        "circle": config.circle_weight,
        "view_ce": config.view_weight,
    }
    total = Tensor(0.0)
    for name in LOSS_PARTS:
        part = as_tensor(parts.get(name, 0.0))
        if not np.all(np.isfinite(part.values)):
            message = ObjectiveErrorMessages.NON_FINITE_PART.value.format(name, part.values.tolist())
            error_logger.error(f"total_loss | {message}")
            raise NonFiniteLossError(message, part=name)
        total = P.add(total, P.mul(weights[name], part))
    return total
