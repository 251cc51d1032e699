"""Configuration loading and validation for asrefine.

Settings come from built-in defaults, then an optional ``.env`` file in the
config directory, then ``ASREFINE_*`` environment variables; command-line
flags are applied last through ``RunConfig.with_overrides``.
"""

import logging
import os
import re
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Any, Optional

from platformdirs import user_config_dir

from .common import APP_NAME, parse_env_value, safe_float, safe_int
from .exceptions import ConfigurationError
from .types import EngineName, RunConfigDict

# =============================================================================
# CONSTANTS
# =============================================================================

DEFAULT_MAX_DEPTH = 20
DEFAULT_NODE_BUDGET = 1_000_000
DEFAULT_SOLVE_TIMEOUT = 10.0
DEFAULT_MUTANT_TIMEOUT = 300.0
DEFAULT_EXPLICIT_BUDGET = 1_000_000
DEFAULT_ENGINE: EngineName = "symbolic"

ENGINES: tuple[EngineName, ...] = ("symbolic", "explicit", "both")

# Clamping bounds for environment-provided integers
MAX_DEPTH_LIMIT = 10_000
MAX_JOBS = 256

logger = logging.getLogger(__name__)


def default_jobs() -> int:
    return os.cpu_count() or 1


# =============================================================================
# XDG DIRECTORY FUNCTIONS
# =============================================================================


def get_config_dir(override: Optional[Path] = None) -> Path:
    """
    Get the configuration directory path.

    Resolution order:
    1. Override path if provided
    2. Current working directory if .env exists
    3. XDG config directory (~/.config/asrefine on Linux,
       ~/Library/Application Support/asrefine on macOS)

    Args:
        override: Optional path to use instead of auto-detection

    Returns:
        Path to the configuration directory

    Raises:
        ConfigurationError: If the override path cannot be resolved
    """
    if override:
        try:
            return Path(override).resolve()
        except (OSError, RuntimeError) as e:
            raise ConfigurationError(f"Invalid config path: {e}") from e

    cwd = Path.cwd()
    if (cwd / ".env").exists():
        return cwd

    return Path(user_config_dir(APP_NAME))


# =============================================================================
# RUN CONFIGURATION
# =============================================================================


@dataclass(frozen=True)
class RunConfig:
    """Effective limits and engine selection for one check or batch run."""

    max_depth: int = DEFAULT_MAX_DEPTH
    node_budget: int = DEFAULT_NODE_BUDGET
    solve_timeout: float = DEFAULT_SOLVE_TIMEOUT
    mutant_timeout: float = DEFAULT_MUTANT_TIMEOUT
    explicit_budget: int = DEFAULT_EXPLICIT_BUDGET
    engine: EngineName = DEFAULT_ENGINE
    jobs: int = 1

    def validate(self) -> "RunConfig":
        """
        Check the invariants and return self.

        Raises:
            ConfigurationError: If a value is out of range
        """
        if self.max_depth < 0:
            raise ConfigurationError(f"max_depth must be >= 0, got {self.max_depth}")
        if self.node_budget <= 0:
            raise ConfigurationError(f"node_budget must be > 0, got {self.node_budget}")
        if self.solve_timeout <= 0:
            raise ConfigurationError(f"solve_timeout must be > 0, got {self.solve_timeout}")
        if self.mutant_timeout <= 0:
            raise ConfigurationError(f"mutant_timeout must be > 0, got {self.mutant_timeout}")
        if self.explicit_budget <= 0:
            raise ConfigurationError(f"explicit_budget must be > 0, got {self.explicit_budget}")
        if self.engine not in ENGINES:
            raise ConfigurationError(f"engine must be one of {', '.join(ENGINES)}")
        if self.jobs < 1:
            raise ConfigurationError(f"jobs must be >= 1, got {self.jobs}")
        return self

    def with_overrides(self, **overrides: Any) -> "RunConfig":
        """Copy with every non-None override applied, validated."""
        changes = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **changes).validate()

    def to_dict(self) -> RunConfigDict:
        data = asdict(self)
        data.pop("jobs")
        return data  # type: ignore[return-value]


# =============================================================================
# LOADING
# =============================================================================


def _load_env_file(env_file: Path) -> None:
    """
    Load environment variables from a .env file.

    Validates each line and sets valid key-value pairs as environment
    variables, without overriding variables already set in the process.
    Invalid lines are logged as warnings and skipped.

    Args:
        env_file: Path to the .env file
    """
    env_key_pattern = re.compile(r"^[a-zA-Z_][a-zA-Z0-9_]*$")

    with open(env_file, encoding="utf-8-sig") as f:  # utf-8-sig handles BOM
        for line_num, line in enumerate(f, 1):
            line = line.strip()

            if not line or line.startswith("#"):
                continue

            if "=" not in line:
                logger.warning(f".env line {line_num}: missing '=' separator, skipping")
                continue

            key, value = line.split("=", 1)
            key = key.strip()

            if not env_key_pattern.match(key):
                logger.warning(f".env line {line_num}: invalid key format '{key[:20]}', skipping")
                continue

            try:
                parsed_value = parse_env_value(value)
            except ValueError as e:
                logger.warning(f".env line {line_num}: {e}, skipping")
                continue

            if "\x00" in parsed_value:
                logger.warning(f".env line {line_num}: value contains null byte, skipping")
                continue

            os.environ.setdefault(key, parsed_value)


def _build_config_dict() -> dict[str, Any]:
    """
    Build the settings dictionary from ASREFINE_* environment variables.

    Returns:
        Dictionary of RunConfig field values
    """
    raw_depth = safe_int(os.getenv("ASREFINE_MAX_DEPTH"), DEFAULT_MAX_DEPTH, "ASREFINE_MAX_DEPTH")
    raw_budget = safe_int(
        os.getenv("ASREFINE_NODE_BUDGET"), DEFAULT_NODE_BUDGET, "ASREFINE_NODE_BUDGET"
    )
    raw_explicit = safe_int(
        os.getenv("ASREFINE_EXPLICIT_BUDGET"), DEFAULT_EXPLICIT_BUDGET, "ASREFINE_EXPLICIT_BUDGET"
    )
    raw_jobs = safe_int(os.getenv("ASREFINE_JOBS"), default_jobs(), "ASREFINE_JOBS")

    return {
        "max_depth": min(MAX_DEPTH_LIMIT, raw_depth),
        "node_budget": max(1, raw_budget),
        "solve_timeout": safe_float(
            os.getenv("ASREFINE_SOLVE_TIMEOUT"), DEFAULT_SOLVE_TIMEOUT, "ASREFINE_SOLVE_TIMEOUT"
        ),
        "mutant_timeout": safe_float(
            os.getenv("ASREFINE_MUTANT_TIMEOUT"),
            DEFAULT_MUTANT_TIMEOUT,
            "ASREFINE_MUTANT_TIMEOUT",
        ),
        "explicit_budget": max(1, raw_explicit),
        "jobs": min(MAX_JOBS, max(1, raw_jobs)),
    }


def load_settings(config_dir: Optional[Path] = None) -> RunConfig:
    """
    Load settings from the .env file and environment variables.

    Args:
        config_dir: Optional directory containing a .env file.
                    If None, uses get_config_dir().

    Returns:
        Validated RunConfig

    Raises:
        ConfigurationError: If a setting is malformed
    """
    if config_dir is None:
        config_dir = get_config_dir()

    env_file = config_dir / ".env"
    if env_file.exists():
        _load_env_file(env_file)
        logger.debug(f"Loaded settings from {env_file}")

    return RunConfig(**_build_config_dict()).validate()
