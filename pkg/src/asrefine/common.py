"""Common utilities shared between asrefine modules."""

import contextlib
import logging
import os
import tempfile
from pathlib import Path
from typing import Optional

from platformdirs import user_data_dir

logger = logging.getLogger(__name__)


# =============================================================================
# SHARED CONSTANTS
# =============================================================================

APP_NAME = "asrefine"

MODEL_SUFFIX = ".as"
MANIFEST_NAME = "manifest.json"


# Use functions for dynamic path resolution (XDG support)
def get_log_dir() -> Path:
    """Get the log directory path using XDG conventions."""
    return Path(user_data_dir(APP_NAME)) / "logs"


# =============================================================================
# DIRECTORY MANAGEMENT
# =============================================================================


def ensure_log_dir() -> None:
    """Ensure log directory exists. Called lazily when needed."""
    get_log_dir().mkdir(parents=True, exist_ok=True)


# =============================================================================
# PARSING FUNCTIONS
# =============================================================================


def parse_env_value(value: str) -> str:
    """
    Parse .env value, handling quotes and whitespace.

    Args:
        value: Raw value from .env file

    Returns:
        Cleaned value with quotes removed

    Raises:
        ValueError: If value is None or not a string
    """
    if value is None or not isinstance(value, str):
        raise ValueError("Environment value must be a non-None string")

    value = value.strip()
    if len(value) >= 2 and (
        (value.startswith('"') and value.endswith('"'))
        or (value.startswith("'") and value.endswith("'"))
    ):
        value = value[1:-1]
    return value


def safe_int(value: Optional[str], default: int, name: str = "value") -> int:
    """
    Safely convert a string to int with validation.

    Args:
        value: String value to convert (can be None)
        default: Default value if value is None
        name: Name of the value for error messages

    Returns:
        Converted integer or default value

    Raises:
        ConfigurationError: If value is not a valid non-negative integer
    """
    from .exceptions import ConfigurationError

    if value is None:
        return default

    try:
        result = int(value)
        if result < 0:
            raise ConfigurationError(f"{name} must be a non-negative integer, got: {value}")
        return result
    except ValueError as exc:
        raise ConfigurationError(f"{name} must be a valid integer, got: {value}") from exc


def safe_float(value: Optional[str], default: float, name: str = "value") -> float:
    """Like ``safe_int`` for positive durations in seconds."""
    from .exceptions import ConfigurationError

    if value is None:
        return default

    try:
        result = float(value)
    except ValueError as exc:
        raise ConfigurationError(f"{name} must be a number, got: {value}") from exc
    if not result > 0:
        raise ConfigurationError(f"{name} must be positive, got: {value}")
    return result


def parse_operator_list(value: Optional[str]) -> list[str]:
    """Split a comma separated ``--ops`` value, dropping blanks and duplicates."""
    if not value:
        return []
    seen: list[str] = []
    for part in value.split(","):
        part = part.strip().lower()
        if part and part not in seen:
            seen.append(part)
    return seen


# =============================================================================
# FILE I/O FUNCTIONS
# =============================================================================


def read_text_file(path: Path) -> str:
    """
    Read a UTF-8 text file.

    Raises:
        OSError: If the file is missing or unreadable
    """
    with open(path, encoding="utf-8") as f:
        return f.read()


def write_text_file(path: Path, content: str) -> None:
    """
    Write content atomically: a temporary file in the same directory is
    renamed over ``path`` so readers never see a half-written model or report.

    Raises:
        OSError: If file operations fail
    """
    resolved_path = path.resolve()
    resolved_path.parent.mkdir(parents=True, exist_ok=True)

    fd, tmp_name = tempfile.mkstemp(dir=resolved_path.parent, prefix=f".{resolved_path.name}.")
    fd_closed = False
    try:
        f = os.fdopen(fd, "w", encoding="utf-8")
        fd_closed = True
        with f:
            f.write(content)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp_name, resolved_path)
    except OSError:
        if not fd_closed:
            with contextlib.suppress(OSError):
                os.close(fd)
        with contextlib.suppress(OSError):
            os.unlink(tmp_name)
        raise
    logger.debug(f"Wrote {resolved_path}")
