from pathlib import Path
from typing import Dict, Optional, Tuple, Union

import numpy as np
import orjson
from safetensors import safe_open
from safetensors.numpy import save_file

# import models
from app.models.class_request_model.config_models import NetworkConfig

# import messages
from app.utils.error_messages import CheckpointErrorMessages
from app.utils.success_messages import TrainingSuccessMessages

# import exceptions
from app.utils.exceptions import CheckpointConfigMismatchError, CheckpointVersionError

# import configurations
from app.configs.config import ProjectConfigurations

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

class CheckpointRepository:
    """
    One safetensors file per model: named float64 tensors (parameters and BN
    running statistics) plus string metadata holding format_version, the variant
    and the JSON network config.
    """
    def __init__(self):
        self.format_version = ProjectConfigurations.CHECKPOINT_FORMAT_VERSION.value

    def save(self, path: Union[str, Path], state: Dict[str, np.ndarray], config: NetworkConfig, extra: Optional[Dict[str, str]] = None) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        metadata = {
            "format_version": self.format_version,
            "variant": config.variant.value,
            "network_config": orjson.dumps(config.model_dump(mode="json"), option=orjson.OPT_SORT_KEYS).decode(),
        }
        metadata.update(extra or {})
        tensors = {name: np.ascontiguousarray(value, dtype=np.float64) for name, value in state.items()}
        save_file(tensors, str(path), metadata=metadata)
        info_logger.info(f"CheckpointRepository.save | {TrainingSuccessMessages.CHECKPOINT_SAVED.value} | path = {path} | tensors = {len(tensors)}")
        return path

    def read(self, path: Union[str, Path]) -> Tuple[Dict[str, np.ndarray], Dict[str, str]]:
        path = Path(path)
        if not path.is_file():
            message = CheckpointErrorMessages.CHECKPOINT_NOT_FOUND.value.format(path)
            error_logger.error(f"CheckpointRepository.read | {message}")
            raise CheckpointVersionError(message)
        with safe_open(str(path), framework="numpy") as handle:
            metadata = handle.metadata() or {}
            state = {name: handle.get_tensor(name) for name in handle.keys()}

        version = metadata.get("format_version")
        if version is None:
            message = CheckpointErrorMessages.VERSION_MISSING.value.format(path)
            error_logger.error(f"CheckpointRepository.read | {message}")
            raise CheckpointVersionError(message)
        if version != self.format_version:
            message = CheckpointErrorMessages.VERSION_MISMATCH.value.format(path, version, self.format_version)
            error_logger.error(f"CheckpointRepository.read | {message}")
            raise CheckpointVersionError(message)
        return state, metadata

    def stored_config(self, metadata: Dict[str, str]) -> NetworkConfig:
        return NetworkConfig.model_validate(orjson.loads(metadata["network_config"]))

    def load(self, path: Union[str, Path], expected: Optional[NetworkConfig] = None) -> Tuple[Dict[str, np.ndarray], NetworkConfig]:
        """
        Returns the stored tensors and network config. With `expected`, the two
        configs must agree on every architecture-defining field.
        """
        state, metadata = self.read(path)
        stored = self.stored_config(metadata)
        if expected is not None:
            stored_fields, expected_fields = stored.fingerprint(), expected.fingerprint()
            differing = sorted(key for key in set(stored_fields) | set(expected_fields) if stored_fields.get(key) != expected_fields.get(key))
            if differing:
                message = CheckpointErrorMessages.CONFIG_MISMATCH.value.format(path, differing)
                error_logger.error(f"CheckpointRepository.load | {message}")
                raise CheckpointConfigMismatchError(message)
        debug_logger.debug(f"CheckpointRepository.load | checkpoint loaded | path = {path} | variant = {stored.variant.value}")
        return state, stored
