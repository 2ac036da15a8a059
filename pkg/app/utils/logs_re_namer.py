import re
from pathlib import Path

_ROTATED = re.compile(r"^(?P<stem>.+)\.log\.(?P<index>\d+)$")

def numbered_log_namer(default_name: str) -> str:
    """
    Rotated backups keep the .log suffix: train.log.1 -> train1.log.
    """
    path = Path(default_name)
    match = _ROTATED.match(path.name)
    if match is None:
        return default_name
    return str(path.with_name(f"{match['stem']}{match['index']}.log"))
