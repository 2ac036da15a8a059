from pathlib import Path
from typing import Union

import orjson
from pydantic import ValidationError

# import models
from app.models.class_request_model.config_models import CustomSkeletonDefinition
from app.models.domain_models.domain_models import SkeletonSpec

# import messages
from app.utils.error_messages import SkeletonErrorMessages

# import exceptions
from app.utils.exceptions import SkeletonError

# import skeleton builder
from app.network.skeleton_graph import build_skeleton

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

class SkeletonRepository:
    """
    Custom skeleton files: {"n": N, "edges": [[i, j], ...], "root": r, "names": [...]?}.
    """
    def read_definition(self, path: Union[str, Path]) -> CustomSkeletonDefinition:
        path = Path(path)
        try:
            return CustomSkeletonDefinition.model_validate(orjson.loads(path.read_bytes()))
        except (OSError, orjson.JSONDecodeError, ValidationError) as e:
            message = SkeletonErrorMessages.SKELETON_FILE_INVALID.value.format(path, e)
            error_logger.error(f"SkeletonRepository.read_definition | {message}")
            raise SkeletonError(message) from e

    def load(self, path: Union[str, Path]) -> SkeletonSpec:
        spec = build_skeleton("custom", self.read_definition(path))
        debug_logger.debug(f"SkeletonRepository.load | path = {path} | joint_count = {spec.joint_count}")
        return spec
