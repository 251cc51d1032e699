"""asrefine - Symbolic refinement checking of action systems for mutation testing."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("asrefine")
except PackageNotFoundError:
    __version__ = "0.0.0"  # Development without install

from .checker import CheckOutcome, check_mutant
from .config import RunConfig, load_settings
from .exceptions import (
    AsRefineError,
    ConfigurationError,
    ModelMismatch,
    ModelValidationError,
    NormalFormViolation,
    ParseError,
    ResourceLimit,
)
from .fixtures import load_fixture
from .model import Model, pretty_print
from .mutation import MutationOperator, enumerate_mutants, mutant_campaign
from .oracle import explicit_check, interpret_step
from .parser import parse_model
from .reachability import Conforming, Inconclusive, NonConforming, reach_non_refine
from .refinement import find_mutated_action
from .semantics import Event, StepVarSpace, translate_action, translate_system

__all__ = [
    "__version__",
    "Model",
    "parse_model",
    "pretty_print",
    "load_fixture",
    "Event",
    "StepVarSpace",
    "translate_action",
    "translate_system",
    "MutationOperator",
    "enumerate_mutants",
    "mutant_campaign",
    "find_mutated_action",
    "reach_non_refine",
    "NonConforming",
    "Conforming",
    "Inconclusive",
    "interpret_step",
    "explicit_check",
    "CheckOutcome",
    "check_mutant",
    "RunConfig",
    "load_settings",
    "AsRefineError",
    "ConfigurationError",
    "ParseError",
    "ModelValidationError",
    "NormalFormViolation",
    "ModelMismatch",
    "ResourceLimit",
]
