"""Custom exceptions for asrefine.

This module defines the exception hierarchy for the asrefine checker.
All exceptions inherit from AsRefineError to allow catching all
application-specific errors with a single except clause.

Example:
    try:
        original = parse_model(text)
        outcome = check_mutant(original, mutant, config)
    except ParseError as e:
        print(e.render("cas.as"))
    except ResourceLimit as e:
        print(f"Gave up: {e}")
    except AsRefineError as e:
        print(f"General error: {e}")
"""

from typing import TYPE_CHECKING, Any, Optional

if TYPE_CHECKING:
    from .model import Location


class AsRefineError(Exception):
    """Base exception for all asrefine errors.

    This is the root of the exception hierarchy. Catching this exception
    will catch all application-specific errors.

    Attributes:
        message: Human-readable error description
    """

    pass


# =============================================================================
# EXIT CODES
# =============================================================================

EXIT_CONFORMING = 0
EXIT_NONCONFORMING = 1
EXIT_INCONCLUSIVE = 2
EXIT_USAGE_ERROR = 3
EXIT_PARSE_ERROR = 4
EXIT_IO_ERROR = 5
EXIT_CONFIG_ERROR = 6


class ConfigurationError(AsRefineError):
    """Raised when configuration is invalid.

    This exception is raised when:
    - An ASREFINE_* environment variable is not a valid integer
    - A RunConfig violates its invariants (negative depth, zero budget)

    Example:
        if max_depth < 0:
            raise ConfigurationError("max_depth must be >= 0")
    """

    pass


class SourceError(AsRefineError):
    """An error tied to a position in a model file."""

    def __init__(self, message: str, location: Optional["Location"] = None) -> None:
        super().__init__(message)
        self.message = message
        self.location = location
        self.source: Optional[str] = None

    def render(self, filename: Optional[str] = None) -> str:
        """Format as ``file:line:col: error: message``; defaults to ``source``."""
        filename = filename or self.source or "<input>"
        if self.location is None:
            return f"{filename}: error: {self.message}"
        return f"{filename}:{self.location.line}:{self.location.column}: error: {self.message}"


class ParseError(SourceError):
    """Raised when model text does not match the grammar.

    This exception is raised when:
    - An unexpected character is met by the lexer
    - The parser meets a token outside the expected set

    Attributes:
        expected: Sorted descriptions of the tokens that would have been accepted
    """

    def __init__(
        self,
        message: str,
        location: Optional["Location"] = None,
        expected: Optional[list[str]] = None,
    ) -> None:
        self.expected = sorted(set(expected or []))
        if self.expected:
            message = f"{message}; expected one of: {', '.join(self.expected)}"
        super().__init__(message, location)


class ModelValidationError(SourceError):
    """Raised when a parsed model violates a static rule."""

    pass


class DuplicateName(ModelValidationError):
    """A type, variable, action, parameter or dood label is declared twice."""

    pass


class UndeclaredName(ModelValidationError):
    """A name is referenced but never declared."""

    pass


class UndeclaredVariable(UndeclaredName):
    pass


class UndeclaredType(UndeclaredName):
    pass


class ArityMismatch(ModelValidationError):
    """Counts disagree: init vs state_def, or dood arguments vs action parameters."""

    pass


class UndefinedAction(ModelValidationError):
    """A dood entry names an action that the actions block does not define."""

    pass


class InitOutOfBounds(ModelValidationError):
    """An init value lies outside its variable's type range."""

    pass


class InvalidDomain(ModelValidationError):
    """A type declares an empty range (lo > hi)."""

    pass


class InvalidAssignment(ModelValidationError):
    """An assignment targets an action parameter instead of a state variable."""

    pass


class NormalFormViolation(SourceError):
    """Raised when a choice sits where sequential composition needs determinism.

    Example:
        (a := 1 [] a := 2) ; b := a
    """

    pass


class InvalidLocation(AsRefineError):
    """Raised when a mutant spec path does not resolve to a node of the right kind."""

    pass


class ModelMismatch(AsRefineError):
    """Raised when an original and a mutant do not share their state layout."""

    pass


class ResourceLimit(AsRefineError):
    """Raised when a search exhausts its node, transition or time budget.

    Distinct from "no solution": the caller turns it into an
    inconclusive verdict.

    Attributes:
        reason: Which budget ran out ("nodes", "timeout", "deadline", "transitions")
        stats: Statistics collected before the limit was hit
    """

    def __init__(self, reason: str, stats: Optional[dict[str, Any]] = None) -> None:
        super().__init__(f"resource limit reached: {reason}")
        self.reason = reason
        self.stats = stats or {}
