import os
import tempfile
from pathlib import Path
from typing import Any, Dict

import yaml
from loguru import logger

from .config import settings
from .errors import DomainError


def init_storage() -> None:
    """Initialize the output directory."""
    os.makedirs(settings.output_dir, exist_ok=True)


def atomic_write_bytes(path: Path | str, data: bytes) -> None:
    """Write data to a file atomically using a temporary file."""
    path = Path(path)
    # Create temporary file in same directory to ensure atomic move
    directory = path.parent if str(path.parent) else Path(".")
    directory.mkdir(parents=True, exist_ok=True)
    temp_file = None
    try:
        with tempfile.NamedTemporaryFile(mode="wb", dir=directory, delete=False) as tf:
            temp_file = tf.name
            tf.write(data)
            tf.flush()
            os.fsync(tf.fileno())

        os.replace(temp_file, path)
    except Exception:
        if temp_file and os.path.exists(temp_file):
            try:
                os.unlink(temp_file)
            except Exception as cleanup_error:
                logger.error(f"Error cleaning up temp file {temp_file}: {cleanup_error}")
        raise


def atomic_write_text(path: Path | str, text: str) -> None:
    """UTF-8 text with LF line endings, written atomically."""
    atomic_write_bytes(path, text.encode("utf-8"))


def load_config_file(path: Path | str) -> Dict[str, Any]:
    """Load a JSON (or YAML) configuration mapping."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            raw_data = yaml.safe_load(f)
    except FileNotFoundError:
        raise DomainError(f"configuration file not found: {path}")
    except yaml.YAMLError as e:
        raise DomainError(f"invalid configuration format in {path}: {e}")
    if raw_data is None:
        return {}
    if not isinstance(raw_data, dict):
        raise DomainError(f"configuration in {path} must be a mapping")
    return raw_data
