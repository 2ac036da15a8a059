from pathlib import Path
from typing import Optional

# import models
from app.models.class_request_model.config_models import RunConfig

# import repositories
from app.repositories.run_config_repository import RunConfigRepository

# import controllers
from app.controllers.data_controllers import DataController
from app.controllers.diagnostics_controllers import DiagnosticsController
from app.controllers.evaluation_controllers import EvaluationController
from app.controllers.training_controllers import TrainingController

# import exceptions
from app.utils.exceptions import CagError

# import exit codes
from app.utils.exit_codes import exit_code_for
from app.utils.command_exit import fail_command

def get_run_config(config: Optional[Path] = None, profile: Optional[str] = None) -> RunConfig:
    try:
        return RunConfigRepository().load(config, profile)
    except CagError as e:
        fail_command("get_run_config", e.message, exit_code_for(e))

def get_training_controller(config: Optional[Path] = None, profile: Optional[str] = None) -> TrainingController:
    # a bare `train` falls back to the desk profile
    if config is None and profile is None:
        profile = "desk"
    return TrainingController(get_run_config(config, profile))

def get_evaluation_controller(config: Optional[Path] = None, profile: Optional[str] = None) -> EvaluationController:
    if config is None and profile is None:
        profile = "desk"
    return EvaluationController(get_run_config(config, profile))

def get_data_controller() -> DataController:
    return DataController()

def get_diagnostics_controller(config: Optional[Path] = None, profile: Optional[str] = None) -> DiagnosticsController:
    if config is None and profile is None:
        return DiagnosticsController()
    return DiagnosticsController(get_run_config(config, profile))
