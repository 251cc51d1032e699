"""Batch command: check every mutant of a model and aggregate a report."""

import errno
import logging
import os
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import rich_click as click

from .checker import check_mutant
from .cli_formatter import CLIOutput as out
from .cli_helpers import command_context, get_run_config, load_model, write_output
from .common import parse_operator_list
from .config import ENGINES, RunConfig
from .exceptions import AsRefineError, SourceError
from .model import Model
from .mutation import (
    ALL_OPERATORS,
    MutantSpec,
    MutationOperator,
    list_mutant_files,
    mutant_campaign,
)
from .report import (
    FORMATS,
    build_report,
    error_report,
    mutant_report,
    report_tables,
    serialize,
)
from .types import MutantReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MutantJob:
    """One mutant to check: either an in-memory model or a file to load."""

    id: int
    spec: Optional[MutantSpec] = None
    model: Optional[Model] = None
    path: Optional[Path] = None


def check_job(original: Model, job: MutantJob, config: RunConfig) -> MutantReport:
    """Check one mutant; failures become an error entry instead of propagating."""
    file = str(job.path) if job.path is not None else None
    try:
        mutant = job.model if job.model is not None else load_model(job.path)  # type: ignore[arg-type]
        outcome = check_mutant(original, mutant, config)
    except SourceError as e:
        logger.warning(f"Mutant {job.id}: {e.render()}")
        return error_report(job.id, job.spec, e.render(), file)
    except (AsRefineError, OSError, ValueError) as e:
        logger.warning(f"Mutant {job.id}: {e}")
        return error_report(job.id, job.spec, str(e), file)
    except Exception as e:
        logger.error(f"Mutant {job.id}: unexpected error: {e}", exc_info=True)
        return error_report(job.id, job.spec, f"unexpected error: {e}", file)
    logger.debug(f"Mutant {job.id}: {outcome.verdict} in {outcome.total_time:.3f}s")
    return mutant_report(job.id, job.spec, outcome, file)


def generated_jobs(original: Model, operators: Sequence[MutationOperator]) -> list[MutantJob]:
    """The original as job 0, then every generated mutant."""
    return [MutantJob(m.id, m.spec, m.model) for m in mutant_campaign(original, operators)]


def directory_jobs(directory: Path) -> list[MutantJob]:
    """
    Jobs for the mutant files in ``directory``.

    Raises:
        FileNotFoundError: If the directory does not exist
    """
    if not directory.is_dir():
        raise FileNotFoundError(errno.ENOENT, os.strerror(errno.ENOENT), str(directory))
    return [MutantJob(i, spec, path=path) for i, path, spec in list_mutant_files(directory)]


def run_jobs(original: Model, jobs: Sequence[MutantJob], config: RunConfig) -> list[MutantReport]:
    """
    Check every job, in a process pool when ``config.jobs`` > 1.

    The result order follows completion; ``build_report`` restores id order.
    """
    if config.jobs <= 1 or len(jobs) <= 1:
        return [check_job(original, job, config) for job in jobs]

    workers = min(config.jobs, len(jobs))
    logger.info(f"Checking {len(jobs)} mutant(s) with {workers} worker(s)")
    entries: list[MutantReport] = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = {pool.submit(check_job, original, job, config): job for job in jobs}
        for future in as_completed(futures):
            job = futures[future]
            try:
                entries.append(future.result())
            except Exception as e:
                # The worker process itself died
                logger.error(f"Mutant {job.id}: worker failed: {e}")
                entries.append(error_report(job.id, job.spec, f"worker failed: {e}"))
    return entries


@click.command("batch")
@click.argument("model_path", metavar="MODEL", type=click.Path(dir_okay=False, path_type=Path))
@click.option(
    "--mutants-dir",
    type=click.Path(file_okay=False, path_type=Path),
    help="Check the mutant files in this directory instead of generating them",
)
@click.option("--ops", help="Comma separated operators: guard_true,comp_invert,int_inc")
@click.option("--max-depth", type=click.IntRange(min=0), help="Reachability depth bound")
@click.option(
    "--timeout",
    type=click.FloatRange(min=0, min_open=True),
    help="Time limit per mutant in seconds",
)
@click.option("--node-budget", type=click.IntRange(min=1), help="Search nodes per solver call")
@click.option("--engine", type=click.Choice(ENGINES), help="Checking engine")
@click.option(
    "--format", "fmt", type=click.Choice(FORMATS), default="text", show_default=True
)
@click.option("-j", "--jobs", type=click.IntRange(min=1), help="Worker processes")
@click.option(
    "-o", "--output", type=click.Path(dir_okay=False, path_type=Path), help="Write report to file"
)
@click.pass_context
def batch(
    ctx: click.Context,
    model_path: Path,
    mutants_dir: Optional[Path],
    ops: Optional[str],
    max_depth: Optional[int],
    timeout: Optional[float],
    node_budget: Optional[int],
    engine: Optional[str],
    fmt: str,
    jobs: Optional[int],
    output: Optional[Path],
) -> None:
    """Check every mutant of MODEL and report verdicts and phase timings.

    Mutants are generated with the selected operators (all by default),
    with the unchanged model checked as mutant 0, or read from
    --mutants-dir. A mutant that cannot be checked is recorded as an
    error entry and the batch continues.
    """
    if mutants_dir is not None and ops:
        raise click.UsageError("--mutants-dir and --ops cannot be combined")

    with command_context("batch"):
        config = get_run_config(
            (ctx.obj or {}).get("config_dir"),
            max_depth=max_depth,
            mutant_timeout=timeout,
            node_budget=node_budget,
            engine=engine,
            jobs=jobs,
        )
        original = load_model(model_path)
        if mutants_dir is not None:
            work = directory_jobs(mutants_dir)
        else:
            names = parse_operator_list(ops)
            operators = MutationOperator.parse(names) if names else list(ALL_OPERATORS)
            work = generated_jobs(original, operators)

        report = build_report(str(model_path), config, run_jobs(original, work, config))
        summary = report["summary"]
        if summary["disagreements"]:
            logger.warning(f"{summary['disagreements']} engine disagreement(s)")

        if fmt == "text" and output is None:
            for table in report_tables(report):
                out.table(table)
            out.verdict_summary(summary["verdicts"])
        else:
            write_output(serialize(report, fmt), output)
            if output is not None:
                out.success(f"Wrote report for {summary['mutants']} mutant(s) to {output}")


def register_batch(main_group: click.Group) -> None:
    """Register the batch command on the main CLI."""
    main_group.add_command(batch)
