"""Tests for CLI formatter utility."""

import io
from unittest.mock import patch

from rich.console import Console

from asrefine.cli_formatter import CLIOutput, out, set_color
from asrefine.exceptions import ModelMismatch


class TestCLIOutput:
    """Tests for CLIOutput class."""

    def test_error_default_prefix(self):
        """Errors go to stderr with the default 'Error' prefix."""
        with patch("asrefine.cli_formatter.err_console") as mock_console:
            CLIOutput.error("Something went wrong")
            mock_console.print.assert_called_once()
            call_args = mock_console.print.call_args[0][0]
            assert "[red]Error: Something went wrong[/red]" in call_args

    def test_error_custom_prefix(self):
        with patch("asrefine.cli_formatter.err_console") as mock_console:
            CLIOutput.error("Aborted", prefix="Interrupted")
            call_args = mock_console.print.call_args[0][0]
            assert "[red]Interrupted: Aborted[/red]" in call_args

    def test_warning_default_prefix(self):
        with patch("asrefine.cli_formatter.err_console") as mock_console:
            CLIOutput.warning("2 engine disagreement(s)")
            call_args = mock_console.print.call_args[0][0]
            assert "[yellow]Warning: 2 engine disagreement(s)[/yellow]" in call_args

    def test_diagnostic_without_markup(self):
        """Diagnostics may contain brackets, so markup is off."""
        with patch("asrefine.cli_formatter.err_console") as mock_console:
            CLIOutput.diagnostic("m.as:3:7: error: expected one of: '[]'")
            mock_console.print.assert_called_once_with(
                "m.as:3:7: error: expected one of: '[]'", markup=False
            )

    def test_success_on_stdout(self):
        with patch("asrefine.cli_formatter.console") as mock_console:
            CLIOutput.success("Wrote 221 mutant(s)")
            call_args = mock_console.print.call_args[0][0]
            assert "[green]Wrote 221 mutant(s)[/green]" in call_args

    def test_plain_is_verbatim(self):
        with patch("asrefine.cli_formatter.console") as mock_console:
            CLIOutput.plain('{"a": [1]}\n')
            mock_console.out.assert_called_once_with('{"a": [1]}\n', highlight=False, end="")

    def test_key_value(self):
        with patch("asrefine.cli_formatter.console") as mock_console:
            CLIOutput.key_value("action", "Lock")
            call_args = mock_console.print.call_args[0][0]
            assert "action" in call_args
            assert "[cyan]Lock[/cyan]" in call_args

    def test_verdict_color(self):
        with patch("asrefine.cli_formatter.console") as mock_console:
            CLIOutput.verdict("nonconforming")
            call_args = mock_console.print.call_args[0][0]
            assert "[bold red]nonconforming[/bold red]" in call_args

    def test_verdict_summary_skips_zeros(self):
        with patch("asrefine.cli_formatter.console") as mock_console:
            CLIOutput.verdict_summary({"nonconforming": 3, "equiv_proved": 0, "inconclusive": 1})
            call_args = mock_console.print.call_args[0][0]
            assert "[red]3 nonconforming[/red]" in call_args
            assert "[yellow]1 inconclusive[/yellow]" in call_args
            assert "equiv_proved" not in call_args

    def test_verdict_summary_empty(self):
        with patch("asrefine.cli_formatter.console") as mock_console:
            CLIOutput.verdict_summary({})
            assert "no mutants" in mock_console.print.call_args[0][0]

    def test_alias(self):
        assert out is CLIOutput


class TestBracketedText:
    """Bracketed text in messages is printed, not read as markup."""

    def test_error_keeps_name_lists(self):
        buffer = io.StringIO()
        console = Console(file=buffer, no_color=True, width=200)
        with patch("asrefine.cli_formatter.err_console", console):
            CLIOutput.error(str(ModelMismatch("state_def differs: [aState, armPending] vs [x, y]")))
        output = buffer.getvalue()
        assert "[aState, armPending]" in output
        assert "[x, y]" in output

    def test_closing_tag_in_message_does_not_raise(self):
        buffer = io.StringIO()
        console = Console(file=buffer, no_color=True, width=200)
        with patch("asrefine.cli_formatter.err_console", console):
            CLIOutput.warning("unexpected '[/red]' in dood")
        assert "[/red]" in buffer.getvalue()

    def test_key_value_keeps_brackets(self):
        buffer = io.StringIO()
        console = Console(file=buffer, no_color=True, width=200)
        with patch("asrefine.cli_formatter.console", console):
            CLIOutput.key_value("dood", "[X:int]:'after'(X)")
        assert "[X:int]:'after'(X)" in buffer.getvalue()


class TestSetColor:
    """Tests for set_color."""

    def test_toggles_both_consoles(self):
        with patch("asrefine.cli_formatter.console") as stdout, patch(
            "asrefine.cli_formatter.err_console"
        ) as stderr:
            set_color(False)
            assert stdout.no_color is True
            assert stderr.no_color is True
            set_color(True)
            assert stdout.no_color is False
