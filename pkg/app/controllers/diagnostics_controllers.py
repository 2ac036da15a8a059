from pathlib import Path
from typing import List, Optional

import typer

# import models
from app.models.class_request_model.config_models import RunConfig

# import repositories
from app.repositories.report_repository import ReportRepository

# import services
from app.services.complexity import ComplexityService
from app.services.gradcheck_suite import GradcheckService
from app.services.inspection import InspectionService
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

# import enums
from app.utils.model_variant_enum import ModelVariant

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

class DiagnosticsController:
    def __init__(self, config: Optional[RunConfig] = None):
        self.config = config
        self.factory = ModelFactoryService()
        self.report_repo = ReportRepository()

    def gradcheck(self, tol: float, h: float, seed: int, include_network: bool = True) -> None:
        try:
            result = GradcheckService(tol=tol, h=h, seed=seed).run(include_network=include_network)
        except Exception as e:
            fail_command("DiagnosticsController.gradcheck", CommandErrorMessages.INTERNAL_ERROR.value.format(e), ExitCodes.INTERNAL_ERROR.value)
        for report in (result.data or {}).get("reports", []):
            verdict = "ok  " if report.passed else "FAIL"
            typer.echo(
                f"{verdict} {report.name:<34} max_rel_err = {report.max_relative_error:.3e} | coordinates = {report.checked_coordinates} | non_smooth = {report.non_smooth_coordinates}"
            )
        if not result.status:
            fail_command("DiagnosticsController.gradcheck", result.message, result.status_code)
        typer.echo(result.message)

    def _complexity(self, variant: Optional[ModelVariant], frames: Optional[int], flops_per_mac: int):
        variants = [variant] if variant is not None else list(ModelVariant)
        try:
            result = ComplexityService(self.config.network).complexity_table(variants, frames=frames, flops_per_mac=flops_per_mac)
        except Exception as e:
            fail_command("DiagnosticsController._complexity", CommandErrorMessages.INTERNAL_ERROR.value.format(e), ExitCodes.INTERNAL_ERROR.value)
        if not result.status:
            fail_command("DiagnosticsController._complexity", result.message, result.status_code)
        return result.data["rows"]

    def params(self, variant: Optional[ModelVariant] = None) -> None:
        typer.echo(f"profile = {self.config.network.profile}")
        typer.echo(f"{'variant':<16} {'parameters':>12} {'M':>8}")
        for row in self._complexity(variant, None, 1):
            typer.echo(f"{row.variant:<16} {row.parameters:>12,d} {row.parameters / 1e6:>8.2f}")

    def flops(self, variant: Optional[ModelVariant] = None, frames: Optional[int] = None, flops_per_mac: int = 1) -> None:
        typer.echo(f"profile = {self.config.network.profile} | frames = {frames or self.config.network.frames} | flops_per_mac = {flops_per_mac}")
        typer.echo(f"{'variant':<16} {'MACs':>14} {'GFLOPs':>8}")
        for row in self._complexity(variant, frames, flops_per_mac):
            typer.echo(f"{row.variant:<16} {row.macs:>14,d} {row.gflops:>8.3f}")

    def topology_correlation(self, checkpoint: Optional[Path], out: Path) -> None:
        checkpoint = checkpoint or Path(self.config.checkpoint_path)
        try:
            model, _ = self.factory.load_model(checkpoint, expected=self.config.network)
            result = InspectionService(model).topology_correlation()
            if result.status:
                self.report_repo.write_matrix(out, result.data["matrix"], result.data["labels"])
        except CagError as e:
            fail_command("DiagnosticsController.topology_correlation", e.message, exit_code_for(e))
        except Exception as e:
            fail_command("DiagnosticsController.topology_correlation", CommandErrorMessages.INTERNAL_ERROR.value.format(e), ExitCodes.INTERNAL_ERROR.value)
        if not result.status:
            fail_command("DiagnosticsController.topology_correlation", result.message, result.status_code)
        typer.echo(f"{result.message} {out}")

    def filter_stats(self, checkpoint: Optional[Path], corpus_dir: Optional[Path], out: Path, block: Optional[int] = None) -> None:
        checkpoint = checkpoint or Path(self.config.checkpoint_path)
        try:
            model, _ = self.factory.load_model(checkpoint, expected=self.config.network)
            records = load_records(self.config, corpus_dir)
            result = InspectionService(model).filter_report(records, block, self.config.training.eval_batch_size)
            if result.status:
                self.report_repo.write_models(out, result.data["rows"])
        except CagError as e:
            fail_command("DiagnosticsController.filter_stats", e.message, exit_code_for(e))
        except Exception as e:
            fail_command("DiagnosticsController.filter_stats", CommandErrorMessages.INTERNAL_ERROR.value.format(e), ExitCodes.INTERNAL_ERROR.value)
        if not result.status:
            fail_command("DiagnosticsController.filter_stats", result.message, result.status_code)
        typer.echo(f"{result.message} {len(result.data['rows'])} rows in {out}")
