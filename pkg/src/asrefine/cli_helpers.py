"""Shared CLI helpers: error mapping, model loading and output writing."""

import json
import logging
import sys
from collections.abc import Generator
from contextlib import contextmanager
from pathlib import Path
from typing import NoReturn, Optional

from .cli_formatter import CLIOutput as out
from .common import read_text_file, write_text_file
from .config import RunConfig, load_settings
from .exceptions import (
    EXIT_CONFIG_ERROR,
    EXIT_IO_ERROR,
    EXIT_PARSE_ERROR,
    EXIT_USAGE_ERROR,
    ConfigurationError,
    InvalidLocation,
    ModelMismatch,
    NormalFormViolation,
    SourceError,
)
from .model import Model
from .parser import parse_model
from .validation import check_normal_form

logger = logging.getLogger(__name__)


def handle_error(e: Exception, context: str = "") -> NoReturn:
    """Report an error on stderr and exit with the code for its type.

    Args:
        e: The exception to handle
        context: Optional context string (e.g., "loading mutant 7")
    """
    prefix = f"{context}: " if context else ""

    exit_code = EXIT_USAGE_ERROR
    if isinstance(e, SourceError):
        out.diagnostic(e.render())
        exit_code = EXIT_PARSE_ERROR
    elif isinstance(e, ConfigurationError):
        out.error(f"{prefix}Config error - {e}")
        exit_code = EXIT_CONFIG_ERROR
    elif isinstance(e, FileNotFoundError):
        out.error(f"{prefix}File not found - {getattr(e, 'filename', None) or e}")
        exit_code = EXIT_IO_ERROR
    elif isinstance(e, PermissionError):
        out.error(f"{prefix}Permission denied - {getattr(e, 'filename', None) or e}")
        exit_code = EXIT_IO_ERROR
    elif isinstance(e, OSError):
        out.error(f"{prefix}I/O error - {e}")
        exit_code = EXIT_IO_ERROR
    elif isinstance(e, json.JSONDecodeError):
        out.error(f"{prefix}Invalid JSON format - {e.msg}")
        exit_code = EXIT_IO_ERROR
    elif isinstance(e, (ModelMismatch, InvalidLocation)):
        out.error(f"{prefix}{e}")
    elif isinstance(e, (ValueError, KeyError)):
        out.error(f"{prefix}Invalid value - {e}")
    else:
        logger.error(f"Unexpected error: {e}", exc_info=True)
        out.error(f"{prefix}Unexpected error: {e}")

    sys.exit(exit_code)


def load_model(path: Path) -> Model:
    """Read, parse, validate and normal-form check a model file.

    Raises:
        OSError: If the file cannot be read
        ParseError, ModelValidationError: If the text is not a valid model
        NormalFormViolation: If a choice is nested where it is not allowed
    """
    try:
        model = parse_model(read_text_file(path))
        violations = check_normal_form(model)
        if violations:
            first = violations[0]
            raise NormalFormViolation(first.message, first.location)
    except SourceError as e:
        e.source = str(path)
        raise
    logger.debug(f"Loaded model {path}")
    return model


def get_run_config(config_dir: Optional[Path] = None, **overrides: object) -> RunConfig:
    """Settings from the config directory with command-line overrides applied.

    Raises:
        ConfigurationError: If a setting or override is invalid
    """
    return load_settings(config_dir).with_overrides(**overrides)


def write_output(text: str, output: Optional[Path]) -> None:
    """Write ``text`` to ``output``, or to stdout when no file is given."""
    if output is None:
        out.plain(text)
        return
    write_text_file(output, text)
    logger.info(f"Wrote {output}")


@contextmanager
def command_context(error_context: str = "") -> Generator[None, None, None]:
    """Context manager turning domain and I/O errors into exit codes.

    Args:
        error_context: Optional context string for error messages

    Example:
        with command_context("checking mutant"):
            original = load_model(orig_path)
            ...
    """
    try:
        yield
    except (
        SourceError,
        ConfigurationError,
        ModelMismatch,
        InvalidLocation,
        OSError,
        ValueError,
        KeyError,
    ) as e:
        handle_error(e, error_context)
    except Exception as e:
        logger.error(f"Unexpected error: {e}", exc_info=True)
        prefix = f"{error_context}: " if error_context else ""
        out.error(f"{prefix}Unexpected error: {e}")
        sys.exit(EXIT_USAGE_ERROR)


@contextmanager
def model_context(path: Path, error_context: str = "") -> Generator[Model, None, None]:
    """Load a model and run the block with domain errors mapped to exit codes.

    Example:
        with model_context(model_path) as model:
            mutants = enumerate_mutants(model)
    """
    with command_context(error_context):
        yield load_model(path)
