from pathlib import Path

from app.configs.config import ProjectConfigurations

PROJECT_ROOT = Path(__file__).resolve().parents[2]

class LogInitializer:
    """
    Resolves the log root (CAG_LOG_DIR, else <project>/logs) and creates the
    file of each stream on first use.
    """
    _ready: set = set()

    @staticmethod
    def log_root() -> Path:
        configured = ProjectConfigurations.LOG_DIR.value
        return Path(configured) if configured else PROJECT_ROOT / "logs"

    @classmethod
    def log_file(cls, stream: str) -> Path:
        folder, filename = ProjectConfigurations.LOG_STREAMS.value[stream]
        path = cls.log_root() / folder / filename
        if stream not in cls._ready:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.touch(exist_ok=True)
            cls._ready.add(stream)
        return path
