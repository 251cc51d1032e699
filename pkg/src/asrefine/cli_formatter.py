"""Centralized CLI output formatting.

Reports and results go to standard output through ``console``; errors and
warnings go to standard error through ``err_console`` so that a report
piped to a file never carries diagnostics. CLI modules print through
CLIOutput rather than calling the consoles directly.
"""

from typing import TYPE_CHECKING, Union

from rich.console import Console
from rich.markup import escape

if TYPE_CHECKING:
    from rich.table import Table

console = Console(highlight=False, soft_wrap=True)
err_console = Console(stderr=True, highlight=False, soft_wrap=True)

VERDICT_COLORS = {
    "nonconforming": "red",
    "equiv_proved": "green",
    "equiv_bounded": "cyan",
    "inconclusive": "yellow",
}


def set_color(enabled: bool) -> None:
    """Switch colour on or off for both consoles."""
    console.no_color = not enabled
    err_console.no_color = not enabled


class CLIOutput:
    """Centralized CLI output formatting."""

    @staticmethod
    def error(msg: str, prefix: str = "Error") -> None:
        """Print error message in red on stderr."""
        err_console.print(f"[red]{escape(prefix)}: {escape(msg)}[/red]")

    @staticmethod
    def warning(msg: str, prefix: str = "Warning") -> None:
        """Print warning message in yellow on stderr."""
        err_console.print(f"[yellow]{escape(prefix)}: {escape(msg)}[/yellow]")

    @staticmethod
    def diagnostic(line: str) -> None:
        """Print a preformatted ``file:line:col: severity: message`` line on stderr."""
        err_console.print(line, markup=False)

    @staticmethod
    def success(msg: str) -> None:
        console.print(f"[green]{escape(msg)}[/green]")

    @staticmethod
    def info(msg: str) -> None:
        console.print(f"  {escape(msg)}")

    @staticmethod
    def plain(text: str) -> None:
        """Print text verbatim, without markup or wrapping (JSON, CSV, models)."""
        console.out(text, highlight=False, end="")

    @staticmethod
    def item_ok(item: str) -> None:
        console.print(f"  [green]✓[/green] {escape(item)}")

    @staticmethod
    def item_fail(item: str) -> None:
        console.print(f"  [red]✗[/red] {escape(item)}")

    @staticmethod
    def header(title: str) -> None:
        console.print(f"\n[bold]{escape(title)}[/bold]")

    @staticmethod
    def key_value(key: str, value: str, color: str = "cyan") -> None:
        """Print key-value pair with consistent formatting."""
        console.print(f"  {escape(key):<14} [{color}]{escape(value)}[/{color}]")

    @staticmethod
    def stat(label: str, value: Union[int, float, str], color: str = "white") -> None:
        console.print(f"    {escape(label)}: [{color}]{escape(str(value))}[/{color}]")

    @staticmethod
    def verdict(name: str) -> None:
        """Print a verdict in its colour."""
        color = VERDICT_COLORS.get(name, "white")
        console.print(f"  {'verdict':<14} [bold {color}]{name}[/bold {color}]")

    @staticmethod
    def table(table: "Table") -> None:
        """Print a Rich table with consistent spacing."""
        console.print()
        console.print(table)

    @staticmethod
    def verdict_summary(counts: dict[str, int]) -> None:
        """Print verdict counts, skipping zeros."""
        parts = [
            f"[{VERDICT_COLORS[name]}]{count} {name}[/{VERDICT_COLORS[name]}]"
            for name, count in counts.items()
            if count > 0 and name in VERDICT_COLORS
        ]
        summary = ", ".join(parts) if parts else "no mutants"
        console.print(f"\n  {summary}\n")


# Convenience alias for shorter imports
out = CLIOutput
