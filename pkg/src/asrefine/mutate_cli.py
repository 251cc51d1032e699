"""Mutate command: write first-order mutants of a model to disk."""

import logging
from pathlib import Path
from typing import Optional

import rich_click as click

from .cli_formatter import CLIOutput as out
from .cli_helpers import model_context
from .common import parse_operator_list
from .mutation import ALL_OPERATORS, MutationOperator, enumerate_mutants, write_mutants

logger = logging.getLogger(__name__)


@click.command("mutate")
@click.argument("model_path", metavar="MODEL", type=click.Path(dir_okay=False, path_type=Path))
@click.argument("out_dir", metavar="OUT_DIR", type=click.Path(file_okay=False, path_type=Path))
@click.option("--ops", help="Comma separated operators: guard_true,comp_invert,int_inc")
def mutate(model_path: Path, out_dir: Path, ops: Optional[str]) -> None:
    """Write every mutant of MODEL to OUT_DIR together with manifest.json.

    Files are named <stem>.mutNNN.as after MODEL's file name, numbered from
    1 in operator order.
    """
    with model_context(model_path, "mutate") as model:
        names = parse_operator_list(ops)
        operators = MutationOperator.parse(names) if names else list(ALL_OPERATORS)
        mutants = enumerate_mutants(model, operators)
        write_mutants(mutants, out_dir, model_path.stem, str(model_path), operators)

    out.success(f"Wrote {len(mutants)} mutant(s) to {out_dir}")
    for operator in operators:
        count = sum(1 for m in mutants if m.spec is not None and m.spec.operator is operator)
        out.stat(operator.value, count)


def register_mutate(main_group: click.Group) -> None:
    """Register the mutate command on the main CLI."""
    main_group.add_command(mutate)
