from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union

import numpy as np
import orjson
from pydantic import ValidationError

# import models
from app.models.domain_models.domain_models import SequenceRecord, SkeletonSpec

# import messages
from app.utils.error_messages import DataErrorMessages
from app.utils.success_messages import DataSuccessMessages

# import exceptions
from app.utils.exceptions import SequenceFormatError

# import configurations
from app.configs.config import ProjectConfigurations

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

HEADER_FIELDS = ("subject", "view", "condition", "n", "cin")

class SequenceRepository:
    """
    Reads and writes skeleton sequence files.

    Line 1 is the header {"subject", "view", "condition", "n", "cin", "seq"?};
    every following line holds one frame {"j": [[x, y(, conf)], ... N joints]}.
    A corpus is the tree <root>/<subject>/<sequence tag>/<view>.jsonl.
    """
    def __init__(self, spec: Optional[SkeletonSpec] = None):
        self.spec = spec
        self.suffix = ProjectConfigurations.SEQUENCE_FILE_SUFFIX.value

    def _reject(self, message: str):
        error_logger.error(f"SequenceRepository | {message}")
        raise SequenceFormatError(message)

    def _parse_line(self, path: Path, number: int, line: bytes) -> Dict:
        try:
            value = orjson.loads(line)
        except orjson.JSONDecodeError as e:
            self._reject(DataErrorMessages.MALFORMED_LINE.value.format(path, number, e))
        if not isinstance(value, dict):
            self._reject(DataErrorMessages.MALFORMED_LINE.value.format(path, number, "expected a JSON object"))
        return value

    def parse(self, path: Union[str, Path], spec: Optional[SkeletonSpec] = None) -> SequenceRecord:
        path = Path(path)
        spec = spec or self.spec
        if not path.is_file():
            self._reject(DataErrorMessages.FILE_NOT_FOUND.value.format(path))
        lines = path.read_bytes().splitlines()
        if not lines or not lines[0].strip():
            self._reject(DataErrorMessages.EMPTY_FILE.value.format(path))

        header = self._parse_line(path, 1, lines[0])
        for field in HEADER_FIELDS:
            if field not in header:
                self._reject(DataErrorMessages.MISSING_HEADER_FIELD.value.format(path, field))
        joints, channels = int(header["n"]), int(header["cin"])
        if spec is not None and joints != spec.joint_count:
            self._reject(DataErrorMessages.HEADER_JOINT_MISMATCH.value.format(path, joints, spec.joint_count))

        frames: List[List[List[float]]] = []
        for number, line in enumerate(lines[1:], start=2):
            if not line.strip():
                continue
            frame = self._parse_line(path, number, line).get("j")
            if not isinstance(frame, list):
                self._reject(DataErrorMessages.MALFORMED_LINE.value.format(path, number, "missing joint list j"))
            if len(frame) != joints:
                self._reject(DataErrorMessages.JOINT_COUNT_MISMATCH.value.format(path, number, joints, len(frame)))
            for joint, values in enumerate(frame):
                if not isinstance(values, list) or len(values) != channels:
                    actual = len(values) if isinstance(values, list) else 1
                    self._reject(DataErrorMessages.CHANNEL_COUNT_MISMATCH.value.format(path, number, joint, actual, channels))
            frames.append(frame)
        if not frames:
            self._reject(DataErrorMessages.NO_FRAMES.value.format(path))

        try:
            values = np.array(frames, dtype=np.float64)
        except (TypeError, ValueError) as e:
            self._reject(DataErrorMessages.MALFORMED_LINE.value.format(path, "?", e))
        if not np.all(np.isfinite(values)):
            bad_frame = int(np.argwhere(~np.isfinite(values))[0][0])
            self._reject(DataErrorMessages.NON_FINITE_COORDINATE.value.format(path, bad_frame + 2))
        try:
            record = SequenceRecord(
                subject_id=str(header["subject"]),
                view_label=int(header["view"]),
                condition=str(header["condition"]),
                sequence_tag=str(header.get("seq", path.parent.name)),
                frames=values,
            )
        except (ValidationError, ValueError, TypeError) as e:
            self._reject(DataErrorMessages.MALFORMED_LINE.value.format(path, 1, e))
        debug_logger.debug(f"SequenceRepository.parse | {DataSuccessMessages.SEQUENCE_PARSED.value} | path = {path} | frames = {record.frame_count}")
        return record

    def write(self, path: Union[str, Path], record: SequenceRecord) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        header = {
            "subject": record.subject_id,
            "view": record.view_label,
            "condition": record.condition,
            "n": record.joint_count,
            "cin": int(record.frames.shape[2]),
            "seq": record.sequence_tag,
        }
        with path.open("wb") as handle:
            handle.write(orjson.dumps(header, option=orjson.OPT_APPEND_NEWLINE))
            for frame in record.frames:
                handle.write(orjson.dumps({"j": frame.tolist()}, option=orjson.OPT_APPEND_NEWLINE))
        return path

    def corpus_path(self, root: Union[str, Path], record: SequenceRecord) -> Path:
        # <subject>/<condition sequence, e.g. nm-02>/<view>.jsonl
        return Path(root) / record.subject_id / record.sequence_tag / f"{record.view_label:03d}{self.suffix}"

    def write_corpus(self, root: Union[str, Path], records: Iterable[SequenceRecord]) -> List[Path]:
        return [self.write(self.corpus_path(root, record), record) for record in records]

    def load_corpus(self, root: Union[str, Path], spec: Optional[SkeletonSpec] = None) -> List[SequenceRecord]:
        """
        Every sequence file under root, in sorted path order.
        """
        root = Path(root)
        paths = sorted(root.glob(f"*/*/*{self.suffix}"))
        if not paths:
            self._reject(DataErrorMessages.EMPTY_CORPUS.value.format(root))
        records = [self.parse(path, spec) for path in paths]
        info_logger.info(f"SequenceRepository.load_corpus | {DataSuccessMessages.CORPUS_LOADED.value} | root = {root} | sequences = {len(records)}")
        return records
