from pathlib import Path
from typing import Optional

import typer

# controller dependencies
from app.dependencies.controller_dependencies import get_training_controller

# import messages
from app.utils.field_descriptions import CommandOptionDescriptions
from app.utils.logger_info_messages import CommandNames, LoggerInfoMessages

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

def train(
    config: Optional[Path] = typer.Option(None, "--config", help=CommandOptionDescriptions.CONFIG.value),
    profile: Optional[str] = typer.Option(None, "--profile", help=CommandOptionDescriptions.PROFILE.value),
    corpus: Optional[Path] = typer.Option(None, "--corpus", help=CommandOptionDescriptions.CORPUS.value),
    topology_mask: Optional[str] = typer.Option(None, "--topology-mask", help=CommandOptionDescriptions.TOPOLOGY_MASK.value),
):
    """
    Train a model and write its checkpoint and metric log.
    """
    info_logger.info(f"train | command = {CommandNames.TRAIN.value} | {LoggerInfoMessages.COMMAND_INVOKED.value} | config = {config} | profile = {profile}")
    controller = get_training_controller(config, profile)
    controller.train(corpus_dir=corpus, topology_mask=topology_mask)
