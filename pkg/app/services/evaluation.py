from typing import Dict, List, Optional, Sequence

import numpy as np

# import models
from app.models.class_request_model.config_models import DataConfig
from app.models.class_return_model.services_class_response_models import ProbeResult, ServiceClassResponse
from app.models.domain_models.domain_models import EmbeddingRow, SequenceRecord

# import engine
from app.engine.tensor import no_grad

# import network
from app.network.cag_model import CagGaitModel

# import services
from app.services.sampling import sample_fixed_length

# import messages
from app.utils.error_messages import DataErrorMessages
from app.utils.success_messages import EvaluationSuccessMessages

# import exceptions
from app.utils.exceptions import CagError, InsufficientDataError

# import exit codes
from app.utils.exit_codes import ExitCodes, exit_code_for

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

ALL_CONDITIONS = "all"

def extract_embeddings(model: CagGaitModel, records: Sequence[SequenceRecord], batch_size: int = 16) -> List[EmbeddingRow]:
    """
    One row per record, in record order. Runs in eval mode with centre crops, so
    rows do not depend on the batch size.
    """
    model.eval()
    frames = model.config.frames
    rows: List[EmbeddingRow] = []
    with no_grad():
        for start in range(0, len(records), max(1, batch_size)):
            chunk = records[start:start + batch_size]
            inputs = np.stack([sample_fixed_length(record, frames, "eval") for record in chunk])
            embedding = model(inputs).embedding.values
            for record, values in zip(chunk, embedding):
                rows.append(EmbeddingRow(
                    subject_id=record.subject_id,
                    view_label=record.view_label,
                    condition=record.condition,
                    sequence_tag=record.sequence_tag,
                    embedding=np.array(values),
                ))
    debug_logger.debug(f"extract_embeddings | {EvaluationSuccessMessages.EMBEDDINGS_EXTRACTED.value} | rows = {len(rows)}")
    return rows

def _mean(values: Sequence[Optional[float]]) -> Optional[float]:
    defined = [value for value in values if value is not None]
    return float(np.mean(defined)) if defined else None

def _nearest(distances: np.ndarray, candidates: np.ndarray) -> int:
    # argmin returns the first minimum, i.e. the earliest gallery row on ties
    return int(candidates[np.argmin(distances[candidates])])

def rank1(
    gallery: Sequence[EmbeddingRow],
    probe: Sequence[EmbeddingRow],
    exclude_identical_view: bool = True,
    condition: str = ALL_CONDITIONS,
) -> ProbeResult:
    """
    Nearest-neighbour retrieval on flattened embeddings under Euclidean distance.

    Cell (i, j) is the hit rate of probes with view_labels[i] matched against the
    gallery rows with view_labels[j]; it is None when either side is empty or
    when i == j under exclusion.
    """
    if not gallery or not probe:
        message = DataErrorMessages.EMPTY_GALLERY_OR_PROBE.value.format(len(gallery), len(probe))
        error_logger.error(f"rank1 | {message}")
        raise InsufficientDataError(message)

    gallery_matrix = np.stack([row.embedding.reshape(-1) for row in gallery])
    gallery_views = np.array([row.view_label for row in gallery])
    gallery_subjects = np.array([row.subject_id for row in gallery])
    views = sorted({int(v) for v in gallery_views} | {row.view_label for row in probe})
    position = {view: index for index, view in enumerate(views)}

    hits = np.zeros((len(views), len(views)))
    counts = np.zeros((len(views), len(views)))
    pooled_hits = pooled_count = 0
    for row in probe:
        difference = gallery_matrix - row.embedding.reshape(-1)
        distances = np.sqrt((difference * difference).sum(axis=1))
        i = position[row.view_label]
        for gallery_view in views:
            if exclude_identical_view and gallery_view == row.view_label:
                continue
            candidates = np.flatnonzero(gallery_views == gallery_view)
            if candidates.size == 0:
                continue
            j = position[gallery_view]
            counts[i, j] += 1
            hits[i, j] += gallery_subjects[_nearest(distances, candidates)] == row.subject_id

        eligible = np.flatnonzero(gallery_views != row.view_label) if exclude_identical_view else np.arange(len(gallery))
        if eligible.size:
            pooled_count += 1
            pooled_hits += gallery_subjects[_nearest(distances, eligible)] == row.subject_id

    matrix: List[List[Optional[float]]] = [
        [float(hits[i, j] / counts[i, j]) if counts[i, j] else None for j in range(len(views))]
        for i in range(len(views))
    ]
    per_view = [_mean(cells) for cells in matrix]
    return ProbeResult(
        condition=condition,
        view_labels=views,
        accuracy_matrix=matrix,
        per_view_average=per_view,
        overall=_mean(per_view),
        pooled_accuracy=float(pooled_hits / pooled_count) if pooled_count else None,
        probe_count=len(probe),
        exclude_identical_view=exclude_identical_view,
    )

def split_gallery_probe(rows: Sequence[EmbeddingRow], data: DataConfig) -> Dict[str, List[EmbeddingRow]]:
    wanted = set(data.eval_subjects)
    if wanted:
        rows = [row for row in rows if row.subject_id in wanted]
    gallery_tags = set(data.gallery_sequences)
    probe_tags = set(data.probe_sequences)
    gallery = [row for row in rows if row.sequence_tag in gallery_tags]
    if probe_tags:
        probe = [row for row in rows if row.sequence_tag in probe_tags]
    else:
        probe = [row for row in rows if row.sequence_tag not in gallery_tags]
    return {"gallery": gallery, "probe": probe}

class EvaluationService:
    def __init__(self, data: DataConfig, batch_size: int = 16):
        self.data = data
        self.batch_size = batch_size

    def evaluate_rows(self, rows: Sequence[EmbeddingRow]) -> List[ProbeResult]:
        """
        One result per probe condition, plus the combined one when there are several.
        """
        split = split_gallery_probe(rows, self.data)
        gallery, probe = split["gallery"], split["probe"]
        exclude = self.data.exclude_identical_view
        conditions = sorted({row.condition for row in probe})
        results = [
            rank1(gallery, [row for row in probe if row.condition == condition], exclude, condition)
            for condition in conditions
        ]
        if len(conditions) != 1:
            results.append(rank1(gallery, probe, exclude, ALL_CONDITIONS))
        return results

    def evaluate(self, model: CagGaitModel, records: Sequence[SequenceRecord]) -> ServiceClassResponse:
        try:
            rows = extract_embeddings(model, records, self.batch_size)
            results = self.evaluate_rows(rows)
            for result in results:
                info_logger.info(
                    f"EvaluationService.evaluate | condition = {result.condition} | overall = {result.overall} | pooled = {result.pooled_accuracy} | probes = {result.probe_count}"
                )
            return ServiceClassResponse(
                status=True,
                status_code=ExitCodes.SUCCESS.value,
                message=EvaluationSuccessMessages.EVALUATION_FINISHED.value,
                data={"results": results},
            )
        except CagError as e:
            error_logger.error(f"EvaluationService.evaluate | {e.message}")
            return ServiceClassResponse(status=False, status_code=exit_code_for(e), message=e.message)
