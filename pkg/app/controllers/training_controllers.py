from pathlib import Path
from typing import List, Optional

import typer

# import models
from app.models.class_request_model.config_models import RunConfig
from app.models.domain_models.domain_models import SequenceRecord

# import repositories
from app.repositories.sequence_repository import SequenceRepository

# import services
from app.services.model_factory import ModelFactoryService
from app.services.training import TrainingService

# import messages
from app.utils.error_messages import CommandErrorMessages, ConfigErrorMessages

# import exceptions
from app.utils.exceptions import CagError, ConfigError

# import exit codes
from app.utils.exit_codes import ExitCodes, exit_code_for
from app.utils.command_exit import fail_command

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

def load_records(config: RunConfig, corpus_dir: Optional[Path]) -> List[SequenceRecord]:
    """
    Corpus named on the command line, else data.corpus_dir of the run config.
    """
    root = corpus_dir or config.data.corpus_dir
    if not root:
        error_logger.error(f"load_records | {ConfigErrorMessages.CORPUS_DIR_MISSING.value}")
        raise ConfigError(ConfigErrorMessages.CORPUS_DIR_MISSING.value)
    spec = ModelFactoryService().resolve_skeleton(config.network)
    return SequenceRepository(spec).load_corpus(root)

class TrainingController:
    def __init__(self, config: RunConfig):
        self.config = config
        self.training_service = TrainingService(config)

    def train(self, corpus_dir: Optional[Path] = None, topology_mask: Optional[str] = None) -> dict:
        try:
            info_logger.info(f"TrainingController.train | started | variant = {self.config.network.variant.value} | topology_mask = {topology_mask}")
            records = load_records(self.config, corpus_dir)
            if topology_mask is None:
                result = self.training_service.train(records)
            else:
                result = self.training_service.run_topology_ablation(records, topology_mask)
        except CagError as e:
            fail_command("TrainingController.train", e.message, exit_code_for(e))
        except Exception as e:
            fail_command("TrainingController.train", CommandErrorMessages.INTERNAL_ERROR.value.format(e), ExitCodes.INTERNAL_ERROR.value)
        if not result.status:
            fail_command("TrainingController.train", result.message, result.status_code)

        if topology_mask is None:
            last = result.data["metrics"][-1]
            typer.echo(f"{result.message} epochs = {last.epoch} | total = {last.total:.6f} | view_accuracy = {last.view_accuracy}")
            typer.echo(f"checkpoint: {result.data['checkpoint_path']}")
        else:
            for label, row in result.data["final_metrics"].items():
                typer.echo(f"mask {label}: triplet = {row.triplet:.6f} | circle = {row.circle:.6f} | view_ce = {row.view_ce:.6f} | total = {row.total:.6f}")
            typer.echo(result.message)
        return result.data
