"""Fixture command: write one of the shipped car alarm system models."""

from pathlib import Path
from typing import Optional

import rich_click as click

from .cli_formatter import CLIOutput as out
from .cli_helpers import command_context, write_output
from .fixtures import fixture_names, fixture_source


@click.command("fixture")
@click.argument("name", type=click.Choice(fixture_names()))
@click.argument(
    "out_path", metavar="OUT", type=click.Path(dir_okay=False, allow_dash=True, path_type=Path)
)
@click.option(
    "--param-max",
    type=click.IntRange(min=0),
    help="Upper bound of the int type, replacing the scaled default (e.g. 30)",
)
def fixture(name: str, out_path: Path, param_max: Optional[int]) -> None:
    """Write the NAME fixture model to OUT ('-' for stdout)."""
    to_stdout = str(out_path) == "-"
    with command_context("fixture"):
        write_output(fixture_source(name, param_max), None if to_stdout else out_path)
    if not to_stdout:
        out.success(f"Wrote {name} to {out_path}")


def register_fixture(main_group: click.Group) -> None:
    """Register the fixture command on the main CLI."""
    main_group.add_command(fixture)
