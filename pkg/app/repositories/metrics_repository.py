from pathlib import Path
from typing import Iterable, List, Union

import orjson
from pydantic import BaseModel

# import models
from app.models.class_return_model.services_class_response_models import EpochMetrics

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

class MetricsRepository:
    """
    Append-only JSONL log; one object per line with sorted keys, so two runs
    with the same seed write byte-identical files.
    """
    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)

    def reset(self) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.path.write_bytes(b"")

    def append(self, row: BaseModel) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        line = orjson.dumps(row.model_dump(mode="json"), option=orjson.OPT_SORT_KEYS | orjson.OPT_APPEND_NEWLINE)
        with self.path.open("ab") as handle:
            handle.write(line)
        debug_logger.debug(f"MetricsRepository.append | path = {self.path} | row = {line.decode().strip()}")

    def extend(self, rows: Iterable[BaseModel]) -> None:
        for row in rows:
            self.append(row)

    def read(self) -> List[EpochMetrics]:
        if not self.path.is_file():
            return []
        return [EpochMetrics.model_validate(orjson.loads(line)) for line in self.path.read_bytes().splitlines() if line.strip()]
