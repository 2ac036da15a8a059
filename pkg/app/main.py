import typer

# custom commands
from app.apis.training_api import train
from app.apis.evaluation_api import evaluate
from app.apis.data_api import synth
from app.apis.diagnostics_api import filter_stats, flops, gradcheck, params, topo_corr

# import logging utility
from app.utils.logger import LoggerFactory

# import logger info messages
from app.utils.logger_info_messages import CommandNames

# initialize logging utility
info_logger = LoggerFactory.get_info_logger()
error_logger = LoggerFactory.get_error_logger()
debug_logger = LoggerFactory.get_debug_logger()

app = typer.Typer(
    name="cag",
    help="Condition-adaptive graph convolution for skeleton-based gait recognition",
    no_args_is_help=True,
    add_completion=False,
)

# include custom commands here
app.command(CommandNames.TRAIN.value)(train)
app.command(CommandNames.EVAL.value)(evaluate)
app.command(CommandNames.SYNTH.value)(synth)
app.command(CommandNames.GRADCHECK.value)(gradcheck)
app.command(CommandNames.PARAMS.value)(params)
app.command(CommandNames.FLOPS.value)(flops)
app.command(CommandNames.TOPO_CORR.value)(topo_corr)
app.command(CommandNames.FILTER_STATS.value)(filter_stats)

if __name__ == "__main__":
    app()
