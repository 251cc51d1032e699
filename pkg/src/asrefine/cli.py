"""Command-line interface for asrefine using Click."""

import json as _json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Optional

import rich_click as click

from . import __version__
from .checker import CheckOutcome, check_mutant
from .cli_formatter import CLIOutput as out
from .cli_formatter import set_color
from .cli_helpers import command_context, get_run_config, load_model, write_output
from .common import ensure_log_dir, get_log_dir, read_text_file
from .config import ENGINES
from .exceptions import (
    EXIT_CONFORMING,
    EXIT_INCONCLUSIVE,
    EXIT_NONCONFORMING,
    EXIT_PARSE_ERROR,
    EXIT_USAGE_ERROR,
    SourceError,
)
from .model import Model, pretty_print
from .parser import parse_model
from .reachability import NonConforming, replay_trace
from .report import (
    FORMATS,
    build_report,
    mutant_report,
    serialize,
    trace_text,
    witness_text,
)
from .semantics import StepVarSpace, formula_to_sexpr, translate_system
from .types import MutantReport
from .validation import check_normal_form

# Configure rich-click styling
click.rich_click.TEXT_MARKUP = "rich"
click.rich_click.SHOW_ARGUMENTS = True
click.rich_click.GROUP_ARGUMENTS_OPTIONS = True

VERDICT_EXIT_CODES = {
    "equiv_proved": EXIT_CONFORMING,
    "equiv_bounded": EXIT_CONFORMING,
    "nonconforming": EXIT_NONCONFORMING,
    "inconclusive": EXIT_INCONCLUSIVE,
}

EXIT_INTERRUPTED = 130

# =============================================================================
# LOGGING SETUP
# =============================================================================


def get_app_log_file() -> Path:
    """Get the app log file path."""
    return get_log_dir() / "asrefine.log"


class _JsonFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        return _json.dumps(
            {
                "timestamp": self.formatTime(record),
                "level": record.levelname,
                "logger": record.name,
                "message": record.getMessage(),
            }
        )


def setup_logging(verbose: bool = False) -> None:
    """Setup logging configuration.

    Configures a file handler in the user data directory and a stderr
    handler. The file handler is skipped when the log directory cannot
    be created. Calling it again only adjusts the level.

    Args:
        verbose: If True, log DEBUG to both handlers; otherwise INFO to the
            file and WARNING to stderr.
    """
    level = logging.DEBUG if verbose else logging.INFO
    root_logger = logging.getLogger()

    # Avoid adding duplicate handlers
    if root_logger.handlers:
        root_logger.setLevel(level)
        return

    root_logger.setLevel(level)

    if os.environ.get("LOG_FORMAT", "").lower() == "json":
        formatter: logging.Formatter = _JsonFormatter()
    else:
        formatter = logging.Formatter("%(asctime)s - %(levelname)s - %(name)s - %(message)s")

    try:
        ensure_log_dir()
        file_handler = logging.FileHandler(get_app_log_file())
        file_handler.setFormatter(formatter)
        root_logger.addHandler(file_handler)
    except OSError as e:
        sys.stderr.write(f"asrefine: log file disabled ({e})\n")

    console_handler = logging.StreamHandler()
    console_handler.setFormatter(formatter)
    console_handler.setLevel(logging.DEBUG if verbose else logging.WARNING)
    root_logger.addHandler(console_handler)


logger = logging.getLogger(__name__)


# =============================================================================
# CLICK CLI
# =============================================================================


class ExitCodeGroup(click.RichGroup):
    """Group whose command-line usage errors exit with EXIT_USAGE_ERROR.

    click exits with 2 on usage errors, which this tool reserves for
    inconclusive verdicts.
    """

    def main(self, *args: Any, **kwargs: Any) -> Any:
        if not kwargs.get("standalone_mode", True):
            return super().main(*args, **kwargs)
        kwargs["standalone_mode"] = False
        try:
            rv = super().main(*args, **kwargs)
        except click.UsageError as e:
            e.show()
            sys.exit(EXIT_USAGE_ERROR)
        except click.ClickException as e:
            e.show()
            sys.exit(EXIT_USAGE_ERROR if e.exit_code == 2 else e.exit_code)
        except click.Abort:
            out.error("Aborted", prefix="Interrupted")
            sys.exit(EXIT_INTERRUPTED)
        sys.exit(rv if isinstance(rv, int) else EXIT_CONFORMING)


@click.group(cls=ExitCodeGroup, invoke_without_command=True)
@click.version_option(version=__version__, prog_name="asrefine")
@click.option("-v", "--verbose", is_flag=True, help="Log debug output to stderr")
@click.option("--no-color", is_flag=True, help="Disable colored output")
@click.option(
    "--config-dir",
    type=click.Path(file_okay=False, path_type=Path),
    help="Directory holding a .env settings file (default: XDG config dir)",
)
@click.pass_context
def main(ctx: click.Context, verbose: bool, no_color: bool, config_dir: Optional[Path]) -> None:
    """asrefine - Refinement checking of action system mutants.

    Finds, for each mutant of an action system model, a reachable state
    where the mutant can take a step the original cannot, together with
    the trace leading there.
    """
    setup_logging(verbose)
    if no_color:
        set_color(False)

    ctx.ensure_object(dict)
    ctx.obj["config_dir"] = config_dir

    if ctx.invoked_subcommand is None:
        click.echo(ctx.get_help())


def verdict_exit_code(verdict: str) -> int:
    return VERDICT_EXIT_CODES.get(verdict, EXIT_INCONCLUSIVE)


# =============================================================================
# VALIDATE
# =============================================================================


@main.command()
@click.argument("model_path", metavar="MODEL", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--pretty", is_flag=True, help="Print the model in canonical syntax")
def validate(model_path: Path, pretty: bool) -> None:
    """Parse MODEL and report static and normal-form errors."""
    with command_context(f"validating {model_path}"):
        try:
            model = parse_model(read_text_file(model_path))
        except SourceError as e:
            e.source = str(model_path)
            raise
        violations = check_normal_form(model)

    for diagnostic in violations:
        out.diagnostic(diagnostic.format(str(model_path)))
    if violations:
        sys.exit(EXIT_PARSE_ERROR)

    if pretty:
        out.plain(pretty_print(model))
        return
    suffix = "y" if len(model.dood) == 1 else "ies"
    out.item_ok(
        f"{model_path}: {len(model.types)} type(s), {len(model.state_def)} state variable(s), "
        f"{len(model.actions)} action(s), {len(model.dood)} do-od entr{suffix}"
    )


# =============================================================================
# CHECK
# =============================================================================


def _dump_formulas(original: Model, mutant: Model, outcome: CheckOutcome) -> None:
    space = StepVarSpace.build(original, mutant)
    out.diagnostic("; original system")
    out.diagnostic(formula_to_sexpr(translate_system(original, space), space))
    constraint = outcome.constraint
    if constraint is not None:
        out.diagnostic(f"; non-refinement constraint for '{constraint.label}'")
        out.diagnostic(formula_to_sexpr(constraint.formula, constraint.space))


def _print_entry(entry: MutantReport, original: Model, outcome: CheckOutcome) -> None:
    out.header(entry["file"] or "mutant")
    out.verdict(entry["verdict"])
    if entry["action"]:
        out.key_value("action", entry["action"])
    if entry["depth"] is not None:
        out.key_value("depth", str(entry["depth"]))
    if isinstance(outcome.result, NonConforming):
        result = outcome.result
        out.key_value("unsafe state", str(list(result.unsafe)))
        out.key_value("trace", trace_text(entry) or "(initial state)")
        out.key_value("witness", witness_text(entry), color="red")
        replayed = result.unsafe in replay_trace(original, result.trace)
        out.key_value("replay", "ok" if replayed else "FAILED", "green" if replayed else "red")
    if entry["reason"]:
        out.key_value("reason", entry["reason"], color="yellow")
    explicit = entry.get("explicit")
    if explicit:
        out.key_value("explicit", explicit["verdict"])
        if "agreement" in entry:
            agreed = entry["agreement"]
            out.key_value("agreement", str(agreed).lower(), "green" if agreed else "red")
    timings = entry["timings"]
    out.header("Timings")
    out.stat("find mutated action", f"{timings['find']:.3f}s")
    out.stat("reach & non-refine", f"{timings['reach']:.3f}s")
    out.stat("total", f"{timings['total']:.3f}s")
    out.stat("solver calls", entry["solver"]["solve_calls"])


@main.command()
@click.argument("orig_path", metavar="ORIG", type=click.Path(dir_okay=False, path_type=Path))
@click.argument("mut_path", metavar="MUT", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--max-depth", type=click.IntRange(min=0), help="Reachability depth bound")
@click.option(
    "--timeout",
    type=click.FloatRange(min=0, min_open=True),
    help="Time limit for the whole check in seconds",
)
@click.option("--node-budget", type=click.IntRange(min=1), help="Search nodes per solver call")
@click.option("--engine", type=click.Choice(ENGINES), help="Checking engine")
@click.option("--format", "fmt", type=click.Choice(FORMATS), default="text", show_default=True)
@click.option("--dump-formulas", is_flag=True, help="Print translated formulas to stderr")
@click.option(
    "-o", "--output", type=click.Path(dir_okay=False, path_type=Path), help="Write report to file"
)
@click.pass_context
def check(
    ctx: click.Context,
    orig_path: Path,
    mut_path: Path,
    max_depth: Optional[int],
    timeout: Optional[float],
    node_budget: Optional[int],
    engine: Optional[str],
    fmt: str,
    dump_formulas: bool,
    output: Optional[Path],
) -> None:
    """Check whether MUT refines ORIG.

    Exits 0 when conforming, 1 when a non-conformance is found and 2 when
    the check gave up.
    """
    with command_context("check"):
        config = get_run_config(
            (ctx.obj or {}).get("config_dir"),
            max_depth=max_depth,
            mutant_timeout=timeout,
            node_budget=node_budget,
            engine=engine,
        )
        original = load_model(orig_path)
        mutant = load_model(mut_path)
        outcome = check_mutant(original, mutant, config)
        entry = mutant_report(1, None, outcome, file=str(mut_path))
        logger.info(f"{mut_path}: {outcome.verdict} in {outcome.total_time:.3f}s")

        if dump_formulas:
            _dump_formulas(original, mutant, outcome)
        if fmt == "text" and output is None:
            _print_entry(entry, original, outcome)
        else:
            write_output(serialize(build_report(str(orig_path), config, [entry]), fmt), output)

    sys.exit(verdict_exit_code(outcome.verdict))


if __name__ == "__main__":
    main()
