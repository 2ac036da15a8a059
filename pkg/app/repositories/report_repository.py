import csv
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel

# import models
from app.models.class_return_model.services_class_response_models import ProbeResult

# import messages
from app.utils.success_messages import EvaluationSuccessMessages

# import configurations
from app.configs.config import ProjectConfigurations

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

def _cell(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.6f}"

class ReportRepository:
    """
    UTF-8 CSV exports. Undefined accuracy cells are written as empty fields.
    """
    def __init__(self):
        self.encoding = ProjectConfigurations.CSV_ENCODING.value

    def _write(self, path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding=self.encoding) as handle:
            writer = csv.writer(handle)
            writer.writerow(list(header))
            for row in rows:
                writer.writerow(list(row))
        info_logger.info(f"ReportRepository._write | {EvaluationSuccessMessages.REPORT_WRITTEN.value} | path = {path}")
        return path

    def write_probe_results(self, path: Union[str, Path], results: List[ProbeResult]) -> Path:
        """
        One block per probe condition: a row per probe view with the per-gallery-view
        cells, then that view's average; closing row `mean` holds the overall figure.
        Gallery columns are the union of every result's views; a result that lacks a
        view leaves its column blank.
        """
        views = sorted({view for result in results for view in result.view_labels})
        rows = []
        for result in results:
            column_of = {view: index for index, view in enumerate(result.view_labels)}
            for row_index, probe_view in enumerate(result.view_labels):
                cells = result.accuracy_matrix[row_index]
                rows.append(
                    [result.condition, probe_view]
                    + [_cell(cells[column_of[view]]) if view in column_of else "" for view in views]
                    + [_cell(result.per_view_average[row_index])]
                )
            rows.append([result.condition, "mean"] + [""] * len(views) + [_cell(result.overall)])
        header = ["condition", "probe_view"] + [f"gallery_{view:03d}" for view in views] + ["average"]
        return self._write(path, header, rows)

    def write_models(self, path: Union[str, Path], rows: Sequence[BaseModel]) -> Path:
        if not rows:
            return self._write(path, [], [])
        header = list(type(rows[0]).model_fields)
        return self._write(path, header, ([getattr(row, field) for field in header] for row in rows))

    def write_matrix(self, path: Union[str, Path], matrix: np.ndarray, labels: Sequence[str]) -> Path:
        rows = ([label] + [f"{value:.10g}" for value in matrix[index]] for index, label in enumerate(labels))
        return self._write(path, ["view"] + list(labels), rows)
