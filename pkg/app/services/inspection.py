from typing import List, Optional, Sequence, Tuple

import numpy as np

# import models
from app.models.class_return_model.services_class_response_models import FilterStatsRow, ServiceClassResponse
from app.models.domain_models.domain_models import SequenceRecord

# import engine
from app.engine.tensor import no_grad

# import network
from app.network.blocks import CagBlock
from app.network.cag_model import CagGaitModel

# import services
from app.services.sampling import sample_fixed_length

# import messages
from app.utils.error_messages import CommandErrorMessages
from app.utils.success_messages import DiagnosticsSuccessMessages

# import exceptions
from app.utils.exceptions import CagError, ConfigError

# import exit codes
from app.utils.exit_codes import ExitCodes, exit_code_for

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

GLOBAL_JOINT = "all"

def _quartiles(values: np.ndarray) -> dict:
    q = np.quantile(values, [0.0, 0.25, 0.5, 0.75, 1.0])
    return {"minimum": q[0], "q1": q[1], "median": q[2], "q3": q[3], "maximum": q[4]}

def _per_sequence(filters: np.ndarray, batch: int) -> np.ndarray:
    # static filters carry no batch axis
    return np.broadcast_to(filters, (batch,) + filters.shape) if filters.ndim == 3 else filters

class InspectionService:
    """
    Read-only views into a trained model: per-joint filter statistics of one
    CAG block and the pairwise distances between learned view topologies.
    """
    def __init__(self, model: CagGaitModel):
        self.model = model

    def _block(self, block_index: Optional[int]) -> Tuple[int, CagBlock]:
        blocks = self.model.cag_blocks()
        if not blocks:
            message = CommandErrorMessages.VARIANT_WITHOUT_JSFL.value.format("filter-stats", self.model.variant.value)
            error_logger.error(f"InspectionService._block | {message}")
            raise ConfigError(message)
        index = len(self.model.joint_stream.blocks) - 1 if block_index is None else block_index
        if not 0 <= index < len(blocks):
            message = CommandErrorMessages.BLOCK_INDEX_OUT_OF_RANGE.value.format(index, len(blocks))
            error_logger.error(f"InspectionService._block | {message}")
            raise ConfigError(message)
        return index, blocks[index]

    def filter_stats(self, records: Sequence[SequenceRecord], block_index: Optional[int] = None, batch_size: int = 16) -> List[FilterStatsRow]:
        index, block = self._block(block_index)
        names = self.model.spec.joint_names
        frames = self.model.config.frames
        rows: List[FilterStatsRow] = []
        self.model.eval()
        block.capture_filters = True
        try:
            with no_grad():
                for start in range(0, len(records), max(1, batch_size)):
                    chunk = records[start:start + batch_size]
                    self.model(np.stack([sample_fixed_length(record, frames, "eval") for record in chunk]))
                    captured = block.last_filters
                    for kind, filters in (("spatial", captured.spatial), ("temporal", captured.temporal)):
                        # (B, K, N | 1, C)
                        filters = _per_sequence(np.asarray(filters), len(chunk))
                        for record, per_record in zip(chunk, filters):
                            for joint in range(per_record.shape[1]):
                                rows.append(FilterStatsRow(
                                    subject_id=record.subject_id,
                                    view_label=record.view_label,
                                    condition=record.condition,
                                    sequence_tag=record.sequence_tag,
                                    block=index,
                                    filter=kind,
                                    joint=names[joint] if per_record.shape[1] == len(names) else GLOBAL_JOINT,
                                    **_quartiles(per_record[:, joint, :]),
                                ))
        finally:
            block.capture_filters = False
            block.last_filters = None
        return rows

    def filter_report(self, records: Sequence[SequenceRecord], block_index: Optional[int] = None, batch_size: int = 16) -> ServiceClassResponse:
        try:
            rows = self.filter_stats(records, block_index, batch_size)
            info_logger.info(f"InspectionService.filter_report | {DiagnosticsSuccessMessages.FILTER_STATS_EXPORTED.value} | rows = {len(rows)}")
            return ServiceClassResponse(status=True, status_code=ExitCodes.SUCCESS.value, message=DiagnosticsSuccessMessages.FILTER_STATS_EXPORTED.value, data={"rows": rows})
        except CagError as e:
            error_logger.error(f"InspectionService.filter_report | {e.message}")
            return ServiceClassResponse(status=False, status_code=exit_code_for(e), message=e.message)

    def topology_correlation(self) -> ServiceClassResponse:
        if self.model.vatl is None:
            message = CommandErrorMessages.VARIANT_WITHOUT_VATL.value.format("topo-corr", self.model.variant.value)
            error_logger.error(f"InspectionService.topology_correlation | {message}")
            return ServiceClassResponse(status=False, status_code=ExitCodes.CONFIG_ERROR.value, message=message)
        matrix = self.model.vatl.correlation_matrix()
        labels = [str(view) for view in range(matrix.shape[0])]
        info_logger.info(f"InspectionService.topology_correlation | {DiagnosticsSuccessMessages.TOPOLOGY_CORRELATION_EXPORTED.value} | views = {len(labels)}")
        return ServiceClassResponse(
            status=True,
            status_code=ExitCodes.SUCCESS.value,
            message=DiagnosticsSuccessMessages.TOPOLOGY_CORRELATION_EXPORTED.value,
            data={"matrix": matrix, "labels": labels},
        )
