try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, Optional, Union

import orjson
from pydantic import ValidationError

# import models
from app.models.class_request_model.config_models import RunConfig

# import network profiles
from app.configs.network_profiles import PROFILE_BATCHES, get_network_profile

# import messages
from app.utils.error_messages import ConfigErrorMessages
from app.utils.logger_info_messages import LoggerInfoMessages

# import exceptions
from app.utils.exceptions import ConfigError

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged

class RunConfigRepository:
    """
    Reads run configs from .toml or .json files.

    `network.profile` (or the `profile` argument) starts the network section from
    a shipped profile; every field written in the file overrides it, nested
    sections (`network.jsfl`) field by field. A profile with a known batch shape
    also fills `training.batch` unless the file sets it.
    """
    def _read_raw(self, path: Path) -> Dict[str, Any]:
        if not path.is_file():
            message = ConfigErrorMessages.CONFIG_NOT_FOUND.value.format(path)
            error_logger.error(f"RunConfigRepository._read_raw | {message}")
            raise ConfigError(message)
        suffix = path.suffix.lower()
        if suffix not in (".toml", ".json"):
            message = ConfigErrorMessages.UNSUPPORTED_CONFIG_SUFFIX.value.format(path)
            error_logger.error(f"RunConfigRepository._read_raw | {message}")
            raise ConfigError(message)
        try:
            raw = tomllib.loads(path.read_text(encoding="utf-8")) if suffix == ".toml" else orjson.loads(path.read_bytes())
        except (OSError, UnicodeDecodeError, tomllib.TOMLDecodeError, orjson.JSONDecodeError) as e:
            message = ConfigErrorMessages.CONFIG_UNREADABLE.value.format(path, e)
            error_logger.error(f"RunConfigRepository._read_raw | {message}")
            raise ConfigError(message) from e
        if not isinstance(raw, dict):
            message = ConfigErrorMessages.CONFIG_UNREADABLE.value.format(path, "top level must be a table")
            error_logger.error(f"RunConfigRepository._read_raw | {message}")
            raise ConfigError(message)
        return raw

    def build(self, raw: Dict[str, Any], profile: Optional[str] = None, source: str = "<defaults>") -> RunConfig:
        raw = dict(raw)
        network = dict(raw.get("network") or {})
        profile = profile or network.get("profile")
        if profile:
            base = get_network_profile(profile).model_dump(mode="json", exclude_none=True)
            network = _deep_merge(base, network)
            network["profile"] = profile
            training = dict(raw.get("training") or {})
            if "batch" not in training and profile in PROFILE_BATCHES:
                training["batch"] = PROFILE_BATCHES[profile].model_dump()
            raw["training"] = training
        raw["network"] = network
        try:
            config = RunConfig.model_validate(raw)
        except ValidationError as e:
            message = ConfigErrorMessages.CONFIG_INVALID.value.format(source, e)
            error_logger.error(f"RunConfigRepository.build | {message}")
            raise ConfigError(message) from e
        info_logger.info(f"RunConfigRepository.build | {LoggerInfoMessages.CONFIG_LOADED.value} | source = {source} | profile = {profile} | variant = {config.network.variant.value}")
        return config

    def load(self, path: Optional[Union[str, Path]] = None, profile: Optional[str] = None) -> RunConfig:
        """
        Without a path, the shipped profile alone (defaults everywhere else).
        """
        if path is None:
            return self.build({}, profile=profile)
        path = Path(path)
        return self.build(self._read_raw(path), profile=profile, source=str(path))
