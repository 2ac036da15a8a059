from collections import defaultdict
from typing import Dict, List, Sequence

import numpy as np

# import models
from app.models.class_request_model.config_models import BatchSpec
from app.models.domain_models.domain_models import Batch, SequenceRecord

# import messages
from app.utils.error_messages import DataErrorMessages

# import exceptions
from app.utils.exceptions import InsufficientDataError, InvalidArgumentError

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

SAMPLING_MODES = ("train", "eval")

def sample_fixed_length(record: SequenceRecord, frames: int, mode: str, rng: np.random.Generator = None) -> np.ndarray:
    """
    (T_raw, N, C_in) -> (frames, N, C_in).

    Longer sequences are cropped: a random window in train mode, the centre
    window in eval mode. Shorter ones are looped: frame t is t mod T_raw.
    """
    if frames < 1:
        message = DataErrorMessages.TARGET_LENGTH_NOT_POSITIVE.value.format(frames)
        error_logger.error(f"sample_fixed_length | {message}")
        raise InvalidArgumentError(message)
    if mode not in SAMPLING_MODES:
        message = DataErrorMessages.UNKNOWN_SAMPLING_MODE.value.format(mode)
        error_logger.error(f"sample_fixed_length | {message}")
        raise InvalidArgumentError(message)
    raw = record.frames
    available = raw.shape[0]
    if available < frames:
        return raw[np.arange(frames) % available]
    if mode == "train":
        start = int(rng.integers(0, available - frames + 1))
    else:
        start = (available - frames) // 2
    return raw[start:start + frames]

def group_by_subject(records: Sequence[SequenceRecord]) -> Dict[str, List[SequenceRecord]]:
    groups: Dict[str, List[SequenceRecord]] = defaultdict(list)
    for record in records:
        groups[record.subject_id].append(record)
    return dict(sorted(groups.items()))

class BatchSampler:
    """
    (p, k) batches: p distinct subjects, k sequences each. Subject labels are
    positions in the sorted subject list of the corpus.
    """
    def __init__(self, records: Sequence[SequenceRecord], spec: BatchSpec, frames: int, mode: str = "train"):
        self.groups = group_by_subject(records)
        self.subjects = list(self.groups)
        self.spec = spec
        self.frames = frames
        self.mode = mode
        if len(self.subjects) < spec.p:
            message = DataErrorMessages.INSUFFICIENT_SUBJECTS.value.format(len(self.subjects), spec.p)
            error_logger.error(f"BatchSampler.__init__ | {message}")
            raise InsufficientDataError(message)

    def sample(self, rng: np.random.Generator) -> Batch:
        chosen = rng.choice(len(self.subjects), size=self.spec.p, replace=False)
        inputs, subject_labels, view_labels, subjects = [], [], [], []
        for label in chosen:
            subject = self.subjects[int(label)]
            pool = self.groups[subject]
            picks = rng.choice(len(pool), size=self.spec.k, replace=len(pool) < self.spec.k)
            for pick in picks:
                record = pool[int(pick)]
                inputs.append(sample_fixed_length(record, self.frames, self.mode, rng))
                subject_labels.append(int(label))
                view_labels.append(record.view_label)
                subjects.append(subject)
        return Batch(
            inputs=np.stack(inputs),
            subject_labels=np.asarray(subject_labels, dtype=np.int64),
            view_labels=np.asarray(view_labels, dtype=np.int64),
            subjects=subjects,
        )

def sample_batch(records: Sequence[SequenceRecord], spec: BatchSpec, frames: int, rng: np.random.Generator, mode: str = "train") -> Batch:
    return BatchSampler(records, spec, frames, mode).sample(rng)
