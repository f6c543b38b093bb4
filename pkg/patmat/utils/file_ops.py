import json
import os
import tempfile
import shutil
from pathlib import Path
from typing import Dict, Any


def _atomic_write(path: str, payload: bytes, backup: bool, suffix: str) -> None:
    dir_name = os.path.dirname(path)
    if dir_name:
        os.makedirs(dir_name, exist_ok=True)

    if backup and os.path.exists(path):
        try:
            shutil.copy2(path, path + ".bak")
        except OSError:
            pass

    fd, tmp_path = tempfile.mkstemp(dir=dir_name or None, prefix=".tmp_", suffix=suffix)
    try:
        with os.fdopen(fd, 'wb') as f:
            f.write(payload)
        os.replace(tmp_path, path)
    except Exception as e:
        if os.path.exists(tmp_path):
            os.unlink(tmp_path)
        raise e


def write_bytes_atomic(path: str, data: bytes, backup: bool = False) -> None:
    """
    Atomic binary write using a temporary file and os.replace.
    Used for the PMZL1 / PMSQ1 containers.
    """
    _atomic_write(path, data, backup, ".bin")


def write_json_atomic(path: str, data: Dict[str, Any], backup: bool = True, indent: int = 2) -> None:
    """
    Atomic JSON write using temporary file and os.replace.
    """
    payload = json.dumps(data, ensure_ascii=False, indent=indent).encode("utf-8")
    _atomic_write(path, payload, backup, ".json")


def read_json_safe(path: str, default: Any = None) -> Any:
    """Read a JSON file; missing, empty or malformed files give `default`."""
    try:
        content = Path(path).read_text(encoding="utf-8").strip()
        return json.loads(content) if content else default
    except (OSError, ValueError):
        return default
