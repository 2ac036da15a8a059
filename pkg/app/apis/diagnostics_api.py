from pathlib import Path
from typing import Optional

import typer

# import configs
from app.configs.config import ProjectConfigurations

# controller dependencies
from app.dependencies.controller_dependencies import get_diagnostics_controller

# import enums
from app.utils.model_variant_enum import ModelVariant

# import messages
from app.utils.field_descriptions import CommandOptionDescriptions
from app.utils.logger_info_messages import CommandNames, LoggerInfoMessages

# import logging utility
from app.utils.logger import LoggerFactory

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

def gradcheck(
    tol: float = typer.Option(ProjectConfigurations.GRADCHECK_TOLERANCE.value, "--tol", help=CommandOptionDescriptions.TOLERANCE.value),
    h: float = typer.Option(ProjectConfigurations.GRADCHECK_STEP.value, "--h", help=CommandOptionDescriptions.STEP.value),
    seed: int = typer.Option(0, "--seed", help=CommandOptionDescriptions.GRADCHECK_SEED.value),
    skip_network: bool = typer.Option(False, "--skip-network", help=CommandOptionDescriptions.SKIP_NETWORK.value),
):
    """
    Finite-difference check of every differentiable operator, graph module and loss.
    """
    info_logger.info(f"gradcheck | command = {CommandNames.GRADCHECK.value} | {LoggerInfoMessages.COMMAND_INVOKED.value} | tol = {tol} | h = {h}")
    get_diagnostics_controller().gradcheck(tol, h, seed, include_network=not skip_network)

def params(
    variant: Optional[ModelVariant] = typer.Option(None, "--variant", help=CommandOptionDescriptions.VARIANT.value),
    profile: Optional[str] = typer.Option(None, "--profile", help=CommandOptionDescriptions.PROFILE.value),
    config: Optional[Path] = typer.Option(None, "--config", help=CommandOptionDescriptions.CONFIG.value),
):
    """
    Parameter count per model variant.
    """
    info_logger.info(f"params | command = {CommandNames.PARAMS.value} | {LoggerInfoMessages.COMMAND_INVOKED.value} | variant = {variant}")
    if config is None and profile is None:
        profile = "casia-b"
    get_diagnostics_controller(config, profile).params(variant)

def flops(
    variant: Optional[ModelVariant] = typer.Option(None, "--variant", help=CommandOptionDescriptions.VARIANT.value),
    profile: Optional[str] = typer.Option(None, "--profile", help=CommandOptionDescriptions.PROFILE.value),
    config: Optional[Path] = typer.Option(None, "--config", help=CommandOptionDescriptions.CONFIG.value),
    frames: Optional[int] = typer.Option(None, "--frames", min=1, help=CommandOptionDescriptions.COMPLEXITY_FRAMES.value),
    flops_per_mac: int = typer.Option(1, "--flops-per-mac", min=1, max=2, help=CommandOptionDescriptions.FLOPS_PER_MAC.value),
):
    """
    Analytic multiply-accumulate count per model variant.
    """
    info_logger.info(f"flops | command = {CommandNames.FLOPS.value} | {LoggerInfoMessages.COMMAND_INVOKED.value} | variant = {variant} | frames = {frames}")
    if config is None and profile is None:
        profile = "casia-b"
    get_diagnostics_controller(config, profile).flops(variant, frames, flops_per_mac)

def topo_corr(
    config: Optional[Path] = typer.Option(None, "--config", help=CommandOptionDescriptions.CONFIG.value),
    profile: Optional[str] = typer.Option(None, "--profile", help=CommandOptionDescriptions.PROFILE.value),
    checkpoint: Optional[Path] = typer.Option(None, "--checkpoint", help=CommandOptionDescriptions.CHECKPOINT.value),
    out: Path = typer.Option(Path("topology_correlation.csv"), "--out", help=CommandOptionDescriptions.OUT_CSV.value),
):
    """
    Correlation between the learned per-view topologies of a checkpoint.
    """
    info_logger.info(f"topo_corr | command = {CommandNames.TOPO_CORR.value} | {LoggerInfoMessages.COMMAND_INVOKED.value} | checkpoint = {checkpoint}")
    if config is None and profile is None:
        profile = "desk"
    get_diagnostics_controller(config, profile).topology_correlation(checkpoint, out)

def filter_stats(
    config: Optional[Path] = typer.Option(None, "--config", help=CommandOptionDescriptions.CONFIG.value),
    profile: Optional[str] = typer.Option(None, "--profile", help=CommandOptionDescriptions.PROFILE.value),
    checkpoint: Optional[Path] = typer.Option(None, "--checkpoint", help=CommandOptionDescriptions.CHECKPOINT.value),
    corpus: Optional[Path] = typer.Option(None, "--corpus", help=CommandOptionDescriptions.CORPUS.value),
    out: Path = typer.Option(Path("filter_stats.csv"), "--out", help=CommandOptionDescriptions.OUT_CSV.value),
    block: Optional[int] = typer.Option(None, "--block", min=0, help=CommandOptionDescriptions.BLOCK.value),
):
    """
    Per-joint quartiles of the generated spatial and temporal filters of one CAG block.
    """
    info_logger.info(f"filter_stats | command = {CommandNames.FILTER_STATS.value} | {LoggerInfoMessages.COMMAND_INVOKED.value} | checkpoint = {checkpoint} | block = {block}")
    if config is None and profile is None:
        profile = "desk"
    get_diagnostics_controller(config, profile).filter_stats(checkpoint, corpus, out, block)
