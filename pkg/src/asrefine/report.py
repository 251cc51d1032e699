"""Check and batch reports: assembly, aggregation and serialization.

Reports are plain dictionaries shaped by the TypedDicts in ``types`` so
they serialize to JSON directly. Mutant entries are always ordered by id,
whatever order the checks finished in.
"""

import csv
import io
import json
from collections.abc import Sequence
from typing import Optional

from rich.console import Console
from rich.markup import escape
from rich.table import Table

from .checker import CheckOutcome, explicit_verdict_name
from .config import RunConfig
from .mutation import MutantSpec
from .reachability import Conforming, NonConforming
from .types import (
    SCHEMA_VERSION,
    BatchReport,
    BatchSummary,
    EventDict,
    ExplicitResultDict,
    FormatName,
    MutantReport,
    PhaseSummary,
    SolverStatsDict,
    VerdictName,
)

FORMATS: tuple[FormatName, ...] = ("json", "csv", "text")

VERDICTS: tuple[VerdictName, ...] = (
    "nonconforming",
    "equiv_proved",
    "equiv_bounded",
    "inconclusive",
)

CSV_COLUMNS = [
    "id",
    "file",
    "operator",
    "path",
    "original",
    "replacement",
    "verdict",
    "action",
    "depth",
    "unsafe_state",
    "trace",
    "witness",
    "find_time",
    "reach_time",
    "total_time",
    "solve_calls",
    "nodes",
    "explicit_verdict",
    "explicit_transitions",
    "agreement",
    "error",
]

_EMPTY_SOLVER: SolverStatsDict = {
    "solve_calls": 0,
    "nodes": 0,
    "failures": 0,
    "elapsed": 0.0,
    "limit_hits": 0,
}


# =============================================================================
# ASSEMBLY
# =============================================================================


def mutant_report(
    mutant_id: int,
    spec: Optional[MutantSpec],
    outcome: CheckOutcome,
    file: Optional[str] = None,
) -> MutantReport:
    """Flatten one check outcome into its report entry."""
    result = outcome.result
    report: MutantReport = {
        "id": mutant_id,
        "file": file,
        "spec": spec.to_dict() if spec else None,
        "verdict": outcome.verdict,
        "action": outcome.action,
        "unsafe_state": None,
        "trace": None,
        "witness": None,
        "depth": None,
        "reason": outcome.reason,
        "timings": {
            "find": round(outcome.find_time, 6),
            "reach": round(outcome.reach_time, 6),
            "total": round(outcome.total_time, 6),
        },
        "solver": outcome.solver.to_dict(),  # type: ignore[typeddict-item]
    }
    if isinstance(result, NonConforming):
        data = result.to_dict()
        report["unsafe_state"] = data["unsafe_state"]
        report["trace"] = data["trace"]
        report["witness"] = data["witness"]
        report["depth"] = len(result.trace)
    elif isinstance(result, Conforming):
        report["depth"] = result.depth

    if outcome.explicit is not None and outcome.explicit_stats is not None:
        explicit: ExplicitResultDict = {
            "verdict": explicit_verdict_name(outcome.explicit),
            "unsafe_state": None,
            "trace_length": None,
            "stats": outcome.explicit_stats.to_dict(),  # type: ignore[typeddict-item]
        }
        if isinstance(outcome.explicit, NonConforming):
            explicit["unsafe_state"] = list(outcome.explicit.unsafe)
            explicit["trace_length"] = len(outcome.explicit.trace)
        elif not isinstance(outcome.explicit, Conforming):
            explicit["reason"] = outcome.explicit.reason
        report["explicit"] = explicit
        if outcome.agreement is not None:
            report["agreement"] = outcome.agreement
    return report


def error_report(
    mutant_id: int, spec: Optional[MutantSpec], message: str, file: Optional[str] = None
) -> MutantReport:
    """Entry for a mutant that could not be checked at all."""
    return {
        "id": mutant_id,
        "file": file,
        "spec": spec.to_dict() if spec else None,
        "verdict": "inconclusive",
        "action": None,
        "unsafe_state": None,
        "trace": None,
        "witness": None,
        "depth": None,
        "reason": "error",
        "timings": {"find": 0.0, "reach": 0.0, "total": 0.0},
        "solver": dict(_EMPTY_SOLVER),  # type: ignore[typeddict-item]
        "error": message,
    }


def _phase(values: Sequence[float]) -> PhaseSummary:
    if not values:
        return {"total": 0.0, "avg": 0.0, "min": 0.0, "max": 0.0}
    total = sum(values)
    return {
        "total": round(total, 6),
        "avg": round(total / len(values), 6),
        "min": round(min(values), 6),
        "max": round(max(values), 6),
    }


def summarize(mutants: Sequence[MutantReport]) -> BatchSummary:
    """Verdict counts and per-phase timing aggregates."""
    verdicts = {name: 0 for name in VERDICTS}
    for m in mutants:
        verdicts[m["verdict"]] += 1
    return {
        "mutants": len(mutants),
        "verdicts": verdicts,
        "find": _phase([m["timings"]["find"] for m in mutants]),
        "reach": _phase([m["timings"]["reach"] for m in mutants]),
        "total": _phase([m["timings"]["total"] for m in mutants]),
        "solver_calls": sum(m["solver"]["solve_calls"] for m in mutants),
        "explicit_transitions": sum(
            m["explicit"]["stats"]["transitions_evaluated"] for m in mutants if "explicit" in m
        ),
        "disagreements": sum(1 for m in mutants if m.get("agreement") is False),
        "errors": sum(1 for m in mutants if "error" in m),
    }


def build_report(model: str, config: RunConfig, mutants: Sequence[MutantReport]) -> BatchReport:
    ordered = sorted(mutants, key=lambda m: m["id"])
    return {
        "schema_version": SCHEMA_VERSION,
        "model": model,
        "engine": config.engine,
        "config": config.to_dict(),
        "mutants": ordered,
        "summary": summarize(ordered),
    }


# =============================================================================
# SERIALIZATION
# =============================================================================


def to_json(report: BatchReport) -> str:
    return json.dumps(report, indent=2) + "\n"


def event_text(event: EventDict) -> str:
    if not event["args"]:
        return str(event["label"])
    return f"{event['label']}({', '.join(str(a) for a in event['args'])})"


def trace_text(m: MutantReport) -> str:
    if m["trace"] is None:
        return ""
    return " ".join(event_text(e) for e in m["trace"])


def witness_text(m: MutantReport) -> str:
    if m["witness"] is None:
        return ""
    witness = m["witness"]
    return f"{event_text(witness['event'])} -> {witness['state']}"


def to_csv(report: BatchReport) -> str:
    """One row per mutant; lists are space separated."""
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for m in report["mutants"]:
        spec = m["spec"]
        explicit = m.get("explicit")
        writer.writerow(
            {
                "id": m["id"],
                "file": m["file"] or "",
                "operator": spec["operator"] if spec else "",
                "path": " ".join(str(i) for i in spec["path"]) if spec else "",
                "original": spec["original"] if spec else "",
                "replacement": spec["replacement"] if spec else "",
                "verdict": m["verdict"],
                "action": m["action"] or "",
                "depth": "" if m["depth"] is None else m["depth"],
                "unsafe_state": " ".join(str(v) for v in m["unsafe_state"] or []),
                "trace": trace_text(m),
                "witness": witness_text(m),
                "find_time": m["timings"]["find"],
                "reach_time": m["timings"]["reach"],
                "total_time": m["timings"]["total"],
                "solve_calls": m["solver"]["solve_calls"],
                "nodes": m["solver"]["nodes"],
                "explicit_verdict": explicit["verdict"] if explicit else "",
                "explicit_transitions": (
                    explicit["stats"]["transitions_evaluated"] if explicit else ""
                ),
                "agreement": "" if "agreement" not in m else str(m["agreement"]).lower(),
                "error": m.get("error", ""),
            }
        )
    return buffer.getvalue()


_VERDICT_STYLE = {
    "nonconforming": "red",
    "equiv_proved": "green",
    "equiv_bounded": "cyan",
    "inconclusive": "yellow",
}


def report_tables(report: BatchReport) -> list[Table]:
    """Rich tables for the text format: one row per mutant, then the phase summary."""
    mutants = Table(title=f"{report['model']} ({report['engine']})", show_lines=False)
    numeric = ("id", "depth", "total s")
    for column in ("id", "mutation", "verdict", "action", "depth", "trace / witness", "total s"):
        mutants.add_column(column, justify="right" if column in numeric else "left")
    for m in report["mutants"]:
        spec = m["spec"]
        change = "original"
        if spec:
            change = f"{spec['operator']} {spec['original']} -> {spec['replacement']}"
        style = _VERDICT_STYLE[m["verdict"]]
        detail = trace_text(m)
        if m["witness"] is not None:
            detail = f"{detail} | {witness_text(m)}".strip(" |")
        if "error" in m:
            detail = m["error"]
        mutants.add_row(
            str(m["id"]),
            escape(change),
            f"[{style}]{m['verdict']}[/{style}]",
            escape(m["action"] or ""),
            "" if m["depth"] is None else str(m["depth"]),
            escape(detail),
            f"{m['timings']['total']:.3f}",
        )

    summary = report["summary"]
    phases = Table(title="Phases (seconds)")
    for column in ("phase", "total", "avg", "min", "max"):
        phases.add_column(column, justify="left" if column == "phase" else "right")
    rows = (
        ("find mutated action", summary["find"]),
        ("reach & non-refine", summary["reach"]),
        ("total", summary["total"]),
    )
    for label, p in rows:
        phases.add_row(label, *(f"{p[k]:.3f}" for k in ("total", "avg", "min", "max")))  # type: ignore[literal-required]
    return [mutants, phases]


def summary_line(summary: BatchSummary) -> str:
    counts = ", ".join(f"{summary['verdicts'][v]} {v}" for v in VERDICTS)
    return f"{summary['mutants']} mutant(s): {counts}"


def to_text(report: BatchReport, width: int = 140) -> str:
    """Plain-text rendering of ``report_tables`` for writing to a file."""
    buffer = io.StringIO()
    console = Console(file=buffer, width=width, no_color=True, highlight=False)
    for table in report_tables(report):
        console.print(table)
    console.print(summary_line(report["summary"]))
    return buffer.getvalue()


def serialize(report: BatchReport, fmt: str) -> str:
    """
    Render in ``json``, ``csv`` or ``text``.

    Raises:
        ValueError: On an unknown format
    """
    if fmt == "json":
        return to_json(report)
    if fmt == "csv":
        return to_csv(report)
    if fmt == "text":
        return to_text(report)
    raise ValueError(f"unknown report format '{fmt}'")
