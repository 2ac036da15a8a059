from pathlib import Path

import typer

# import services and skeleton builder
from app.network.skeleton_graph import build_skeleton
from app.services.synthetic_walker import SyntheticWalkerService

# import exceptions
from app.utils.exceptions import CagError

# import exit codes
from app.utils.exit_codes import ExitCodes, exit_code_for
from app.utils.error_messages import CommandErrorMessages
from app.utils.command_exit import fail_command

# import enums
from app.utils.model_variant_enum import SkeletonName

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

class DataController:
    def synthesize(
        self,
        out_dir: Path,
        subjects: int,
        views: int,
        sequences: int,
        frames: int,
        seed: int,
        skeleton: SkeletonName,
        input_channels: int,
    ) -> int:
        try:
            info_logger.info(f"DataController.synthesize | writing synthetic corpus | out = {out_dir} | skeleton = {skeleton.value}")
            spec = build_skeleton(skeleton)
            result = SyntheticWalkerService(spec).synthesize_corpus(out_dir, subjects, views, sequences, frames, seed, input_channels)
        except CagError as e:
            fail_command("DataController.synthesize", e.message, exit_code_for(e))
        except Exception as e:
            fail_command("DataController.synthesize", CommandErrorMessages.INTERNAL_ERROR.value.format(e), ExitCodes.INTERNAL_ERROR.value)
        if not result.status:
            fail_command("DataController.synthesize", result.message, result.status_code)
        typer.echo(f"{result.message} {result.data['files']} files under {result.data['out_dir']}")
        debug_logger.debug(f"DataController.synthesize | result = {result}")
        return result.data["files"]
