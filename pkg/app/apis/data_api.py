from pathlib import Path

import typer

# controller dependencies
from app.dependencies.controller_dependencies import get_data_controller

# import enums
from app.utils.model_variant_enum import SkeletonName

# import messages
from app.utils.field_descriptions import CommandOptionDescriptions
from app.utils.logger_info_messages import CommandNames, LoggerInfoMessages

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

def synth(
    subjects: int = typer.Option(8, "--subjects", min=1, help=CommandOptionDescriptions.SUBJECTS.value),
    views: int = typer.Option(11, "--views", min=1, help=CommandOptionDescriptions.VIEWS.value),
    seqs: int = typer.Option(4, "--seqs", min=1, help=CommandOptionDescriptions.SEQUENCES.value),
    out: Path = typer.Option(Path("corpus"), "--out", help=CommandOptionDescriptions.OUT_DIR.value),
    frames: int = typer.Option(60, "--frames", min=1, help=CommandOptionDescriptions.FRAMES.value),
    seed: int = typer.Option(0, "--seed", help=CommandOptionDescriptions.SEED.value),
    skeleton: SkeletonName = typer.Option(SkeletonName.COCO17, "--skeleton", help=CommandOptionDescriptions.SKELETON.value),
    input_channels: int = typer.Option(2, "--input-channels", min=2, max=3, help=CommandOptionDescriptions.INPUT_CHANNELS.value),
):
    """
    Write a synthetic gait corpus: one JSONL file per subject, sequence and view.
    """
    info_logger.info(f"synth | command = {CommandNames.SYNTH.value} | {LoggerInfoMessages.COMMAND_INVOKED.value} | out = {out}")
    get_data_controller().synthesize(out, subjects, views, seqs, frames, seed, skeleton, input_channels)
