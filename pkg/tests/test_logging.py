import os
from pathlib import Path

from app.utils.log_initializer import LogInitializer
from app.utils.logger import LoggerFactory
from app.utils.logs_re_namer import numbered_log_namer

def test_rotated_names_keep_the_suffix():
    assert numbered_log_namer("/var/logs/info/info.log.3") == str(Path("/var/logs/info/info3.log"))
    assert numbered_log_namer("/var/logs/info/info.log") == "/var/logs/info/info.log"

def test_streams_write_under_the_configured_root():
    assert LogInitializer.log_root() == Path(os.environ["CAG_LOG_DIR"])
    logger = LoggerFactory.get_error_logger()
    assert logger is LoggerFactory.get_error_logger()
    assert len(logger.handlers) == 1 and not logger.propagate
    logger.error("test_logging | error stream check")
    logger.handlers[0].flush()
    assert "error stream check" in (LogInitializer.log_root() / "error" / "error.log").read_text(encoding="utf-8")
