from enum import Enum

from app.utils.exceptions import (
    CheckpointConfigMismatchError,
    CheckpointVersionError,
    ConfigError,
    InsufficientDataError,
    SequenceFormatError,
    SkeletonError,
)

class ExitCodes(Enum):
    SUCCESS = 0
    INTERNAL_ERROR = 1
    # 2 is emitted by click itself for unknown flags and bad option values
    USAGE_ERROR = 2
    CONFIG_ERROR = 3
    CHECKPOINT_MISMATCH = 4
    GRADCHECK_FAILED = 5
    DATA_ERROR = 6

def exit_code_for(error: Exception) -> int:
    if isinstance(error, (ConfigError, SkeletonError)):
        return ExitCodes.CONFIG_ERROR.value
    if isinstance(error, (CheckpointVersionError, CheckpointConfigMismatchError)):
        return ExitCodes.CHECKPOINT_MISMATCH.value
    if isinstance(error, (SequenceFormatError, InsufficientDataError)):
        return ExitCodes.DATA_ERROR.value
    return ExitCodes.INTERNAL_ERROR.value
