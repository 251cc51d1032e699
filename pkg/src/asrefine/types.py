"""Type definitions for asrefine using TypedDict.

This module provides structured type definitions for the JSON documents
the tool reads and writes: the mutant manifest and the check/batch
reports. The report layout is documented in docs/report-schema.md.
"""

from typing import Literal, Optional

from typing_extensions import NotRequired, TypedDict

SCHEMA_VERSION = "1"

# =============================================================================
# ENUMERATED NAMES
# =============================================================================

OperatorName = Literal["guard_true", "comp_invert", "int_inc"]

VerdictName = Literal["nonconforming", "equiv_proved", "equiv_bounded", "inconclusive"]

EngineName = Literal["symbolic", "explicit", "both"]

FormatName = Literal["json", "csv", "text"]


# =============================================================================
# MUTANT MANIFEST
# =============================================================================


class MutantSpecDict(TypedDict):
    """One first-order change: operator, AST path and the swapped tokens."""

    operator: OperatorName
    path: list[int]
    original: str
    replacement: str


class ManifestEntry(TypedDict):
    """A mutant file written by ``asrefine mutate``."""

    id: int
    file: str
    spec: MutantSpecDict


class Manifest(TypedDict):
    """Contents of manifest.json."""

    schema_version: str
    original: str
    operators: list[OperatorName]
    mutants: list[ManifestEntry]


# =============================================================================
# VERDICT PAYLOADS
# =============================================================================


class EventDict(TypedDict):
    label: str
    args: list[int]


class WitnessDict(TypedDict):
    """The step only the mutant can take from the unsafe state."""

    event: EventDict
    state: list[int]


class SolverStatsDict(TypedDict):
    solve_calls: int
    nodes: int
    failures: int
    elapsed: float
    limit_hits: int


class ExplicitStatsDict(TypedDict):
    states_expanded: int
    transitions_evaluated: int
    elapsed: float


class ExplicitResultDict(TypedDict):
    """Outcome of the explicit engine for one mutant."""

    verdict: VerdictName
    unsafe_state: Optional[list[int]]
    trace_length: Optional[int]
    stats: ExplicitStatsDict
    reason: NotRequired[str]


class TimingsDict(TypedDict):
    """Seconds spent per phase: locating the action, reaching it, overall."""

    find: float
    reach: float
    total: float


# =============================================================================
# REPORTS
# =============================================================================


class MutantReport(TypedDict):
    """Result of checking one mutant against the original."""

    id: int
    file: Optional[str]
    spec: Optional[MutantSpecDict]
    verdict: VerdictName
    action: Optional[str]
    unsafe_state: Optional[list[int]]
    trace: Optional[list[EventDict]]
    witness: Optional[WitnessDict]
    depth: Optional[int]
    reason: Optional[str]
    timings: TimingsDict
    solver: SolverStatsDict
    explicit: NotRequired[ExplicitResultDict]
    agreement: NotRequired[bool]
    error: NotRequired[str]


class PhaseSummary(TypedDict):
    total: float
    avg: float
    min: float
    max: float


class BatchSummary(TypedDict):
    """Aggregates over all mutants in a report."""

    mutants: int
    verdicts: dict[str, int]
    find: PhaseSummary
    reach: PhaseSummary
    total: PhaseSummary
    solver_calls: int
    explicit_transitions: int
    disagreements: int
    errors: int


class RunConfigDict(TypedDict):
    max_depth: int
    node_budget: int
    solve_timeout: float
    mutant_timeout: float
    explicit_budget: int
    engine: EngineName


class BatchReport(TypedDict):
    """Top-level JSON document for ``check`` and ``batch``."""

    schema_version: str
    model: str
    engine: EngineName
    config: RunConfigDict
    mutants: list[MutantReport]
    summary: BatchSummary
