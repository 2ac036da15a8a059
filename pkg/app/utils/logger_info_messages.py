from enum import Enum

class LoggerInfoMessages(Enum):
    COMMAND_INVOKED = "Command invoked"
    CONFIG_LOADED = "Run config loaded"

"""
Command names as typed on the command line, shared by the typer app and the info logger
"""
class CommandNames(Enum):
    TRAIN = "train"
    EVAL = "eval"
    SYNTH = "synth"
    GRADCHECK = "gradcheck"
    PARAMS = "params"
    FLOPS = "flops"
    TOPO_CORR = "topo-corr"
    FILTER_STATS = "filter-stats"
