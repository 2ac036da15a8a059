from enum import Enum
from decouple import config

class ProjectConfigurations(Enum):
    # ---------------------------------------------------------------------------------------------------------------------------------
    # LOGS RELATED CONFIGURATIONS
    # ---------------------------------------------------------------------------------------------------------------------------------
    # stream -> (sub directory, file name)
    LOG_STREAMS = {
            "info": ("info", "info.log"),
            "error": ("error", "error.log"),
            "debug": ("debug", "debug.log"),
        }
    LOG_RECORD_FORMAT = "[%(asctime)s] [%(levelname)s] [%(name)s] %(message)s"
    LOGGER_NAME_PREFIX = "cag"
    LOG_MAX_BYTES = 5 * 1024 * 1024
    LOG_BACKUP_COUNT = 10

    LOG_DIR : str = config(
        "CAG_LOG_DIR",
        default="",
        cast=str
    )
    DEBUG_LOGS_ENABLED : bool = config(
        "CAG_LOG_LEVEL_DEBUG",
        default=True,
        cast=bool
    )

    # ---------------------------------------------------------------------------------------------------------------------------------
    # NUMERICAL DEFAULTS
    # ---------------------------------------------------------------------------------------------------------------------------------
    BN_EPS = 1e-5
    BN_MOMENTUM = 0.1
    TRIPLET_DISTANCE_FLOOR = 1e-12
    COSINE_NORM_FLOOR = 1e-12
    VIEW_TOPOLOGY_INIT_NOISE = 0.01

    # ---------------------------------------------------------------------------------------------------------------------------------
    # GRADIENT CHECK DEFAULTS
    # ---------------------------------------------------------------------------------------------------------------------------------
    GRADCHECK_STEP = 1e-5
    GRADCHECK_TOLERANCE = 1e-4
    GRADCHECK_MAX_NON_SMOOTH_SHARE = 0.05

    # ---------------------------------------------------------------------------------------------------------------------------------
    # ARTIFACT RELATED CONFIGURATIONS
    # ---------------------------------------------------------------------------------------------------------------------------------
    CHECKPOINT_FORMAT_VERSION = "1"
    SEQUENCE_FILE_SUFFIX = ".jsonl"
    CSV_ENCODING = "utf-8"
