"""Tests for the model lexer, parser and pretty printer."""

import pytest

from asrefine.exceptions import ParseError
from asrefine.model import (
    Assign,
    BoolConst,
    Choice,
    Compare,
    CompareOp,
    Conjunction,
    Const,
    Guarded,
    Location,
    Seq,
    VarRef,
    pretty_print,
)
from asrefine.parser import parse_model, parse_unvalidated, tokenize

from .conftest import ARITH_SOURCE, SIGNED_SOURCE

MINIMAL = """\
type(t, X) :- X in 0..3.
var([a], t).
state_def([a]).
init([1]).
as :-
    actions(
        Step::(a #< 3) => (a := a + 1)
    ),
    dood(Step).
"""


class TestTokenize:
    """Tests for the lexer."""

    def test_comments_and_whitespace_dropped(self):
        """Comments and blanks produce no tokens."""
        tokens = tokenize("% a comment\n  init ")
        assert [t.text for t in tokens if t.kind != "EOF"] == ["init"]

    def test_locations_are_one_based(self):
        """Token locations count lines and columns from 1."""
        tokens = tokenize("\n  abc")
        assert tokens[0].loc == Location(2, 3)

    def test_longest_operator_wins(self):
        """#=< is one token, not #= followed by <."""
        tokens = tokenize("a #=< b")
        assert tokens[1].text == "#=<"

    def test_unexpected_character(self):
        """An unknown character raises ParseError with its position."""
        with pytest.raises(ParseError) as exc_info:
            tokenize("init(@)")
        assert exc_info.value.location == Location(1, 6)


class TestParseModel:
    """Tests for parse_model."""

    def test_cas_declarations(self, cas):
        """The car alarm system has four types, six state variables and eleven actions."""
        assert [t.name for t in cas.types] == ["enum_State", "enum_From", "enum_Bool", "int"]
        assert cas.state_def == (
            "aState",
            "fromAlarm",
            "fromArmed",
            "armPending",
            "flashOn",
            "soundOn",
        )
        assert cas.init == (6, 0, 0, 0, 0, 0)
        assert len(cas.actions) == 11
        assert len(cas.dood) == 11

    def test_cas_after_parameter_bound_from_dood(self, cas):
        """'after' takes one parameter typed by its do-od binding."""
        after = cas.action_named("after")
        assert after.param_names == ("Wait_time",)
        assert after.params[0].type_name == "int"
        assert cas.param_type(after, "Wait_time").hi == 270

    def test_choice_is_right_nested(self, cas):
        """Three branches parse as Choice(b1, Choice(b2, b3))."""
        body = cas.action_named("after").body
        assert isinstance(body, Choice)
        assert isinstance(body.left, Guarded)
        assert isinstance(body.right, Choice)
        assert isinstance(body.right.right, Guarded)

    def test_branch_structure(self, cas):
        """A branch is a guard over a sequence of assignments."""
        first = cas.action_named("Lock").body.left
        assert isinstance(first, Guarded)
        assert isinstance(first.guard, Conjunction)
        assert first.guard.left == Compare(CompareOp.EQ, VarRef("aState"), Const(6))
        assert first.body == Assign("aState", Const(5))

    def test_sequence(self, cas):
        """';' builds a Seq."""
        branch = cas.action_named("Lock").body.right
        assert isinstance(branch.body, Seq)
        assert branch.body.second == Assign("fromArmed", Const(0))

    def test_bare_labels(self):
        """Labels may be written without quotes."""
        model = parse_model(MINIMAL)
        assert model.actions[0].label == "Step"
        assert model.dood[0].label == "Step"
        assert model.actions[0].guard == Compare(CompareOp.LT, VarRef("a"), Const(3))

    def test_true_guard(self, cas):
        assert cas.action_named("Lock").guard == BoolConst(True)

    def test_negative_constants(self):
        model = parse_model(SIGNED_SOURCE)
        assert model.types[0].lo == -2
        assert model.action_named("down").params[0].type_name == "sgn"

    def test_locations_excluded_from_equality(self):
        """The same model laid out differently compares equal."""
        squashed = " ".join(MINIMAL.split())
        assert parse_model(squashed) == parse_model(MINIMAL)

    def test_missing_period_reports_expected_tokens(self):
        """Errors name the position and what would have been accepted."""
        with pytest.raises(ParseError) as exc_info:
            parse_unvalidated(MINIMAL.replace("state_def([a]).", "state_def([a])"))
        error = exc_info.value
        assert error.location is not None
        assert error.location.line == 4
        assert "'.'" in error.expected

    def test_render_uses_source(self):
        """render() prefixes the file name set on the error."""
        with pytest.raises(ParseError) as exc_info:
            parse_unvalidated("init(")
        exc_info.value.source = "m.as"
        assert exc_info.value.render().startswith("m.as:1:")

    def test_unbound_dood_argument(self):
        text = MINIMAL.replace("dood(Step)", "dood([X:t]:Step(Y))")
        with pytest.raises(ParseError, match="not bound"):
            parse_unvalidated(text)

    def test_type_binder_mismatch(self):
        with pytest.raises(ParseError, match="binder"):
            parse_unvalidated(MINIMAL.replace("X in 0..3", "Y in 0..3"))


class TestPrettyPrint:
    """Tests for pretty_print."""

    @pytest.mark.parametrize("source", [MINIMAL, ARITH_SOURCE, SIGNED_SOURCE])
    def test_reparses_to_same_model(self, source):
        model = parse_model(source)
        assert parse_model(pretty_print(model)) == model

    def test_cas_reparses_to_same_model(self, cas):
        assert parse_model(pretty_print(cas)) == cas

    def test_dood_binding_rendered(self, cas):
        assert "[X:int]:'after'(X)" in pretty_print(cas)
