"""Tests for static model checks and the normal-form check."""

import pytest

from asrefine.exceptions import (
    ArityMismatch,
    DuplicateName,
    InitOutOfBounds,
    InvalidAssignment,
    InvalidDomain,
    ModelValidationError,
    UndeclaredType,
    UndeclaredVariable,
    UndefinedAction,
)
from asrefine.parser import parse_model, parse_unvalidated
from asrefine.validation import check_normal_form, validate_model

from .conftest import NESTED_CHOICE_SOURCE

BASE = """\
type(t, X) :- X in 0..3.
var([a, b], t).
state_def([a, b]).
init([0, 1]).
as :-
    actions(
        'go'(P)::(a #< 3) => (a := a + P),
        'stop'::(true) => (b := 0)
    ),
    dood([P:t]:'go'(P) [] 'stop').
"""


def variant(old: str, new: str) -> str:
    assert old in BASE
    return BASE.replace(old, new)


class TestValidateModel:
    """Tests for validate_model."""

    def test_valid_model_binds_parameter_types(self):
        model = parse_model(BASE)
        assert model.action_named("go").params[0].type_name == "t"

    def test_unbound_parameters_stay_untyped(self):
        """An action outside the do-od block keeps untyped parameters."""
        model = parse_model(variant("dood([P:t]:'go'(P) [] 'stop')", "dood('stop')"))
        go = model.action_named("go")
        assert go.params[0].type_name is None
        assert model.participating()[0][1].label == "stop"

    @pytest.mark.parametrize(
        "old,new,error",
        [
            ("type(t, X) :- X in 0..3.", "type(t, X) :- X in 3..0.", InvalidDomain),
            ("var([a, b], t).", "var([a, b], t).\nvar([a], t).", DuplicateName),
            ("var([a, b], t).", "var([a, b], u).", UndeclaredType),
            ("state_def([a, b]).", "state_def([a, c]).", UndeclaredVariable),
            ("state_def([a, b]).", "state_def([a, a]).", DuplicateName),
            ("init([0, 1]).", "init([0]).", ArityMismatch),
            ("init([0, 1]).", "init([0, 4]).", InitOutOfBounds),
            ("(b := 0)", "(c := 0)", UndeclaredVariable),
            ("(a #< 3)", "(z #< 3)", UndeclaredVariable),
            ("(a := a + P)", "(P := a)", InvalidAssignment),
            ("[] 'stop')", "[] 'halt')", UndefinedAction),
            ("[] 'stop')", "[] 'stop' [] 'stop')", DuplicateName),
            ("[P:t]:'go'(P)", "'go'", ArityMismatch),
            ("[P:t]:'go'(P)", "[P:w]:'go'(P)", UndeclaredType),
            ("'stop'::", "'go'::", DuplicateName),
            ("'go'(P)::", "'go'(a)::", DuplicateName),
        ],
    )
    def test_static_rule_violations(self, old, new, error):
        with pytest.raises(error):
            validate_model(parse_unvalidated(variant(old, new)))

    @pytest.mark.parametrize(
        "old,new",
        [
            ("(a #< 3)", "(c #< 3)"),
            ("(b := 0)", "(c := 0)"),
        ],
    )
    def test_variable_outside_state_def(self, old, new):
        """A declared variable missing from state_def is named as such."""
        text = variant("var([a, b], t).", "var([a, b, c], t).").replace(old, new)
        with pytest.raises(UndeclaredVariable) as exc_info:
            validate_model(parse_unvalidated(text))
        message = str(exc_info.value)
        assert "'c' which is not in state_def" in message
        assert "undeclared" not in message

    def test_unknown_variable_is_undeclared(self):
        with pytest.raises(UndeclaredVariable, match="undeclared variable 'z'"):
            validate_model(parse_unvalidated(variant("(a #< 3)", "(z #< 3)")))

    def test_errors_carry_locations(self):
        """Validation errors point at the offending declaration."""
        with pytest.raises(ModelValidationError) as exc_info:
            parse_model(variant("var([a, b], t).", "var([a, b], u)."))
        location = exc_info.value.location
        assert location is not None
        assert location.line == 2


class TestNormalForm:
    """Tests for check_normal_form."""

    def test_cas_is_in_normal_form(self, cas):
        assert check_normal_form(cas) == []

    def test_choice_left_of_sequence(self):
        """A choice on the left of ';' is reported once, with its location."""
        diagnostics = check_normal_form(parse_model(NESTED_CHOICE_SOURCE))
        assert len(diagnostics) == 1
        diagnostic = diagnostics[0]
        assert diagnostic.severity == "error"
        assert "left of ';'" in diagnostic.message
        assert diagnostic.path == (0, 1)
        assert diagnostic.format("bad.as").startswith("bad.as:")

    def test_choice_under_guard(self):
        """A choice guarded inside a branch is nested, not at the body root."""
        text = NESTED_CHOICE_SOURCE.replace(
            "((a := 1 [] a := 2); b := a)", "((a #= 0) => (a := 1 [] a := 2))"
        )
        diagnostics = check_normal_form(parse_model(text))
        assert len(diagnostics) == 1
        assert "nested" in diagnostics[0].message

    def test_top_level_choice_allowed(self):
        text = NESTED_CHOICE_SOURCE.replace(
            "((a := 1 [] a := 2); b := a)", "(a := 1 [] a := 2 [] b := a)"
        )
        assert check_normal_form(parse_model(text)) == []
