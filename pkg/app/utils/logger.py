import logging
from logging.handlers import RotatingFileHandler

from app.configs.config import ProjectConfigurations
from app.utils.log_initializer import LogInitializer
from app.utils.logs_re_namer import numbered_log_namer

class LoggerFactory:
    """
    One non-propagating logger per stream (info, error, debug), each writing
    to its own rotating file under the log root.

    The debug stream drops to INFO when CAG_LOG_LEVEL_DEBUG is false.
    """
    @staticmethod
    def _stream_logger(stream: str, level: int) -> logging.Logger:
        logger = logging.getLogger(f"{ProjectConfigurations.LOGGER_NAME_PREFIX.value}.{stream}")
        logger.setLevel(level)
        if logger.handlers:
            return logger

        handler = RotatingFileHandler(
            LogInitializer.log_file(stream),
            maxBytes=ProjectConfigurations.LOG_MAX_BYTES.value,
            backupCount=ProjectConfigurations.LOG_BACKUP_COUNT.value,
            encoding="utf-8",
        )
        handler.namer = numbered_log_namer
        handler.setFormatter(logging.Formatter(ProjectConfigurations.LOG_RECORD_FORMAT.value))
        logger.addHandler(handler)
        logger.propagate = False
        return logger

    @classmethod
    def get_info_logger(cls) -> logging.Logger:
        return cls._stream_logger("info", logging.INFO)

    @classmethod
    def get_error_logger(cls) -> logging.Logger:
        return cls._stream_logger("error", logging.ERROR)

    @classmethod
    def get_debug_logger(cls) -> logging.Logger:
        enabled = ProjectConfigurations.DEBUG_LOGS_ENABLED.value
        return cls._stream_logger("debug", logging.DEBUG if enabled else logging.INFO)
