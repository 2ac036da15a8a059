from pathlib import Path
from typing import Optional, Tuple, Union

# import models
from app.models.class_request_model.config_models import CustomSkeletonDefinition, NetworkConfig
from app.models.domain_models.domain_models import SkeletonSpec

# import network
from app.network.cag_model import CagGaitModel
from app.network.skeleton_graph import build_skeleton

# import repositories
from app.repositories.checkpoint_repository import CheckpointRepository
from app.repositories.skeleton_repository import SkeletonRepository

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

class ModelFactoryService:
    """
    Builds skeletons and models from a NetworkConfig, and restores models from checkpoints.
    """
    def __init__(self):
        self.skeleton_repo = SkeletonRepository()
        self.checkpoint_repo = CheckpointRepository()

    def resolve_skeleton(self, config: NetworkConfig) -> SkeletonSpec:
        if config.custom_skeleton is not None:
            return build_skeleton(config.skeleton, config.custom_skeleton)
        if config.custom_skeleton_path:
            return self.skeleton_repo.load(config.custom_skeleton_path)
        return build_skeleton(config.skeleton)

    def build_model(self, config: NetworkConfig, seed: int = 0, spec: Optional[SkeletonSpec] = None) -> CagGaitModel:
        spec = spec or self.resolve_skeleton(config)
        model = CagGaitModel(config, spec, seed=seed)
        debug_logger.debug(f"ModelFactoryService.build_model | variant = {config.variant.value} | skeleton = {spec.name} | seed = {seed}")
        return model

    def canonical_config(self, config: NetworkConfig, spec: Optional[SkeletonSpec] = None) -> NetworkConfig:
        """
        Inlines a skeleton read from custom_skeleton_path, so checkpoints carry the graph itself.
        """
        if config.custom_skeleton is not None or not config.custom_skeleton_path:
            return config
        spec = spec or self.resolve_skeleton(config)
        inline = CustomSkeletonDefinition(joint_count=spec.joint_count, edges=list(spec.edges), root=spec.root_joint, names=list(spec.joint_names))
        return config.model_copy(update={"custom_skeleton": inline, "custom_skeleton_path": None})

    def load_model(self, path: Union[str, Path], expected: Optional[NetworkConfig] = None) -> Tuple[CagGaitModel, NetworkConfig]:
        """
        Rebuilds the stored architecture and copies the stored tensors into it; the model is left in eval mode.
        """
        expected = self.canonical_config(expected) if expected is not None else None
        state, stored = self.checkpoint_repo.load(path, expected=expected)
        if expected is not None:
            stored = stored.model_copy(update={"profile": expected.profile})
        model = self.build_model(stored)
        model.load_state_dict(state)
        model.eval()
        info_logger.info(f"ModelFactoryService.load_model | checkpoint restored | path = {path} | variant = {stored.variant.value}")
        return model, stored

    def save_model(self, path: Union[str, Path], model: CagGaitModel, extra: Optional[dict] = None) -> Path:
        return self.checkpoint_repo.save(path, model.state_dict(), self.canonical_config(model.config, model.spec), extra=extra)
