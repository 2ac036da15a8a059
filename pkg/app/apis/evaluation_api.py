from pathlib import Path
from typing import Optional

import typer

# controller dependencies
from app.dependencies.controller_dependencies import get_evaluation_controller

# import messages
from app.utils.field_descriptions import CommandOptionDescriptions
from app.utils.logger_info_messages import CommandNames, LoggerInfoMessages

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

def evaluate(
    config: Optional[Path] = typer.Option(None, "--config", help=CommandOptionDescriptions.CONFIG.value),
    profile: Optional[str] = typer.Option(None, "--profile", help=CommandOptionDescriptions.PROFILE.value),
    checkpoint: Optional[Path] = typer.Option(None, "--checkpoint", help=CommandOptionDescriptions.CHECKPOINT.value),
    corpus: Optional[Path] = typer.Option(None, "--corpus", help=CommandOptionDescriptions.CORPUS.value),
    csv: Optional[Path] = typer.Option(None, "--csv", help=CommandOptionDescriptions.EVAL_CSV.value),
):
    """
    Rank-1 accuracy of a checkpoint on the gallery/probe split of a corpus.
    """
    info_logger.info(f"evaluate | command = {CommandNames.EVAL.value} | {LoggerInfoMessages.COMMAND_INVOKED.value} | checkpoint = {checkpoint}")
    controller = get_evaluation_controller(config, profile)
    controller.evaluate(checkpoint=checkpoint, corpus_dir=corpus, csv_path=csv)
