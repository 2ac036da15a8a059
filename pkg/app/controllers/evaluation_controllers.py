from pathlib import Path
from typing import List, Optional

import typer

# import models
from app.models.class_request_model.config_models import RunConfig
from app.models.class_return_model.services_class_response_models import ProbeResult

# import repositories
from app.repositories.report_repository import ReportRepository

# import services
from app.services.evaluation import EvaluationService
from app.services.model_factory import ModelFactoryService

# import controllers helpers
from app.controllers.training_controllers import load_records

# import messages
from app.utils.error_messages import CommandErrorMessages

# import exceptions
from app.utils.exceptions import CagError

# import exit codes
from app.utils.exit_codes import ExitCodes, exit_code_for
from app.utils.command_exit import fail_command

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

def _percent(value: Optional[float]) -> str:
    return "   -  " if value is None else f"{100.0 * value:6.2f}"

def format_probe_result(result: ProbeResult) -> List[str]:
    lines = [
        f"[{result.condition}] probes = {result.probe_count} | overall = {_percent(result.overall).strip()} | pooled = {_percent(result.pooled_accuracy).strip()}"
    ]
    lines.append("probe\\gallery " + " ".join(f"{view:6d}" for view in result.view_labels) + "   mean")
    for view, cells, average in zip(result.view_labels, result.accuracy_matrix, result.per_view_average):
        lines.append(f"{view:13d} " + " ".join(_percent(cell) for cell in cells) + " " + _percent(average))
    return lines

class EvaluationController:
    def __init__(self, config: RunConfig):
        self.config = config
        self.factory = ModelFactoryService()
        self.report_repo = ReportRepository()

    def evaluate(self, checkpoint: Optional[Path] = None, corpus_dir: Optional[Path] = None, csv_path: Optional[Path] = None) -> List[ProbeResult]:
        checkpoint = checkpoint or Path(self.config.checkpoint_path)
        try:
            info_logger.info(f"EvaluationController.evaluate | started | checkpoint = {checkpoint}")
            model, _ = self.factory.load_model(checkpoint, expected=self.config.network)
            records = load_records(self.config, corpus_dir)
            result = EvaluationService(self.config.data, self.config.training.eval_batch_size).evaluate(model, records)
            if result.status and csv_path is not None:
                self.report_repo.write_probe_results(csv_path, result.data["results"])
        except CagError as e:
            fail_command("EvaluationController.evaluate", e.message, exit_code_for(e))
        except Exception as e:
            fail_command("EvaluationController.evaluate", CommandErrorMessages.INTERNAL_ERROR.value.format(e), ExitCodes.INTERNAL_ERROR.value)
        if not result.status:
            fail_command("EvaluationController.evaluate", result.message, result.status_code)

        for probe_result in result.data["results"]:
            for line in format_probe_result(probe_result):
                typer.echo(line)
        if csv_path is not None:
            typer.echo(f"csv: {csv_path}")
        return result.data["results"]
