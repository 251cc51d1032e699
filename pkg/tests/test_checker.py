"""Tests for checking one mutant with either engine."""

from unittest.mock import patch

import pytest

from asrefine.checker import (
    CheckOutcome,
    check_mutant,
    engines_agree,
    explicit_verdict_name,
)
from asrefine.config import RunConfig
from asrefine.exceptions import ModelMismatch, NormalFormViolation
from asrefine.fixtures import load_fixture
from asrefine.mutation import MutationOperator, apply_mutant, enumerate_mutants
from asrefine.parser import parse_model
from asrefine.reachability import Conforming, Inconclusive, NonConforming
from asrefine.report import build_report, mutant_report, serialize
from asrefine.semantics import Event

from .conftest import ARITH_SOURCE, NESTED_CHOICE_SOURCE


class TestSymbolic:
    """Tests for the symbolic engine."""

    def test_self_check_is_proved(self, cas):
        outcome = check_mutant(cas, cas, RunConfig())
        assert outcome.verdict == "equiv_proved"
        assert outcome.candidates == []
        assert outcome.action is None
        assert outcome.conforming

    def test_lock_mutant(self, cas, lock_mutant):
        outcome = check_mutant(cas, lock_mutant.model, RunConfig())
        assert outcome.verdict == "nonconforming"
        assert outcome.action == "Lock"
        assert outcome.candidates == [1]
        result = outcome.result
        assert isinstance(result, NonConforming)
        assert result.unsafe == (6, 0, 0, 0, 0, 0)
        assert result.trace == ()
        assert result.witness == (Event("Lock"), (3, 0, 0, 0, 0, 0))
        assert outcome.total_time >= outcome.find_time
        assert outcome.solver.solve_calls >= 2

    def test_node_budget_makes_inconclusive(self, cas, lock_mutant):
        outcome = check_mutant(cas, lock_mutant.model, RunConfig(node_budget=1))
        assert outcome.verdict == "inconclusive"
        assert outcome.reason == "solver limit on action(s): Lock"
        assert outcome.inconclusive_actions == [1]

    def test_bounded_when_out_of_reach(self, planted_pair):
        original, mutant = planted_pair(3)
        outcome = check_mutant(original, mutant, RunConfig(max_depth=2))
        assert outcome.verdict == "equiv_bounded"
        assert outcome.result == Conforming(2)
        assert outcome.action == "mark"

    @pytest.mark.parametrize("depth", [0, 1, 2, 3])
    def test_planted_depths(self, planted_pair, depth):
        original, mutant = planted_pair(depth)
        outcome = check_mutant(original, mutant)
        assert outcome.verdict == "nonconforming"
        assert len(outcome.result.trace) == depth

    def test_layout_mismatch(self, cas, arith_model):
        with pytest.raises(ModelMismatch):
            check_mutant(cas, arith_model)

    def test_normal_form_violation(self):
        """A mutant outside normal form cannot be translated."""
        original = parse_model(
            NESTED_CHOICE_SOURCE.replace("((a := 1 [] a := 2); b := a)", "(a := 1; b := a)")
        )
        mutant = parse_model(NESTED_CHOICE_SOURCE)
        with pytest.raises(NormalFormViolation):
            check_mutant(original, mutant)

    def test_later_candidate_after_unreachable_one(self):
        """A candidate that is never reached does not hide a later one that is."""
        text = ARITH_SOURCE.replace(
            "(x #< y) => (y := 0)", "(x #< y) => (y := 0) [] (x #> 9) => (y := 1)"
        )
        original = parse_model(text)
        mutant = parse_model(
            text.replace("(x #> 9) => (y := 1)", "(x #> 4) => (y := 1)").replace(
                "y := x * 2", "y := x * 3"
            )
        )
        outcome = check_mutant(original, mutant)
        assert outcome.verdict == "nonconforming"
        assert outcome.action == "mul"
        assert outcome.candidates == [1, 2]


class TestEngines:
    """Tests for the explicit engine and engine comparison."""

    def test_explicit_engine(self, cas, lock_mutant):
        outcome = check_mutant(cas, lock_mutant.model, RunConfig(engine="explicit"))
        assert outcome.verdict == "nonconforming"
        assert outcome.result == outcome.explicit
        assert outcome.explicit_stats.transitions_evaluated > 0
        assert outcome.agreement is None

    def test_both_engines_agree(self, cas, lock_mutant):
        outcome = check_mutant(cas, lock_mutant.model, RunConfig(engine="both"))
        assert outcome.verdict == "nonconforming"
        assert isinstance(outcome.explicit, NonConforming)
        assert outcome.agreement is True

    def test_both_engines_planted(self, planted_pair):
        original, mutant = planted_pair(2)
        outcome = check_mutant(original, mutant, RunConfig(engine="both"))
        assert outcome.agreement is True

    def test_explicit_budget(self, cas, lock_mutant):
        config = RunConfig(engine="explicit", explicit_budget=100)
        outcome = check_mutant(cas, lock_mutant.model, config)
        assert outcome.verdict == "inconclusive"
        assert outcome.reason == "explicit: transitions"

    def test_verdict_names(self):
        assert explicit_verdict_name(Conforming(3)) == "equiv_bounded"
        assert explicit_verdict_name(Inconclusive("timeout")) == "inconclusive"

    def test_agreement_rules(self):
        found = NonConforming((1,), (), (Event("a"), (2,)))
        symbolic = CheckOutcome(verdict="nonconforming", result=found)
        assert engines_agree(symbolic, found) is True
        longer = NonConforming((1,), (Event("b"),), (Event("a"), (2,)))
        assert engines_agree(symbolic, longer) is False
        assert engines_agree(symbolic, Conforming(5)) is False
        assert engines_agree(CheckOutcome(verdict="equiv_proved"), Conforming(5)) is True
        assert engines_agree(symbolic, Inconclusive("nodes")) is None


def lock_fixture_pair(name):
    original = load_fixture(name)
    spec = enumerate_mutants(original, [MutationOperator.GUARD_TRUE])[4].spec
    return original, apply_mutant(original, spec)


class TestDepthBound:
    """A nonconforming result at depth d is unchanged by any larger bound."""

    @pytest.mark.parametrize("depth", [0, 1, 2, 3])
    def test_planted_monotone(self, planted_pair, depth):
        original, mutant = planted_pair(depth)
        first = check_mutant(original, mutant, RunConfig(max_depth=depth))
        assert first.verdict == "nonconforming"
        for max_depth in range(depth + 1, depth + 6):
            outcome = check_mutant(original, mutant, RunConfig(max_depth=max_depth))
            assert outcome.verdict == "nonconforming"
            assert outcome.result == first.result

    @pytest.mark.parametrize("name", ["cas_1", "cas_10"])
    def test_lock_monotone(self, name):
        original, mutant = lock_fixture_pair(name)
        first = check_mutant(original, mutant, RunConfig(max_depth=0))
        assert first.verdict == "nonconforming"
        for max_depth in (1, 5, 20):
            outcome = check_mutant(original, mutant, RunConfig(max_depth=max_depth))
            assert outcome.result == first.result


class TestDeterminism:
    """Re-running a check with a frozen clock gives a byte-identical report."""

    def render(self, original, mutant, engine, fmt):
        config = RunConfig(engine=engine)
        with patch("time.monotonic", return_value=0.0):
            outcome = check_mutant(original, mutant, config)
        return serialize(build_report("cas.as", config, [mutant_report(1, None, outcome)]), fmt)

    @pytest.mark.parametrize("name", ["cas_1", "cas_10"])
    @pytest.mark.parametrize("fmt", ["json", "csv"])
    def test_lock_report_repeats(self, name, fmt):
        original, mutant = lock_fixture_pair(name)
        first = self.render(original, mutant, "symbolic", fmt)
        assert self.render(original, mutant, "symbolic", fmt) == first

    def test_both_engines_repeat(self, planted_pair):
        original, mutant = planted_pair(2)
        first = self.render(original, mutant, "both", "json")
        assert self.render(original, mutant, "both", "json") == first
        assert '"agreement": true' in first
