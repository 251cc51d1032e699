"""Tests for the reference interpreter and the explicit-state check."""

import pytest

from asrefine.model import ArithOp, BinOp, Compare, CompareOp, Const, VarRef
from asrefine.oracle import (
    ExplicitStats,
    eval_expr,
    eval_guard,
    explicit_check,
    interpret_step,
    ordered,
)
from asrefine.parser import parse_model
from asrefine.reachability import Conforming, Inconclusive, NonConforming
from asrefine.semantics import Event

from .conftest import NESTED_CHOICE_SOURCE


class TestInterpreter:
    """Tests for direct AST evaluation."""

    def test_eval_expr(self):
        e = BinOp(ArithOp.SUB, BinOp(ArithOp.MUL, VarRef("a"), Const(3)), Const(1))
        assert eval_expr(e, {"a": 4}) == 11

    def test_eval_guard(self):
        g = Compare(CompareOp.GE, VarRef("a"), Const(2))
        assert eval_guard(g, {"a": 2})
        assert not eval_guard(g, {"a": 1})

    def test_out_of_range_assignment_is_infeasible(self, arith_model):
        """mul doubles x into y, whose type stops at 5."""
        steps = interpret_step(arith_model, (3, 0))
        assert not any(event.label == "mul" for event, _ in steps)

    def test_parameter_enumeration_counted(self, cas):
        stats = ExplicitStats()
        interpret_step(cas, cas.init, stats)
        # 271 values for after's parameter plus one try for each other action
        assert stats.transitions_evaluated == 271 + 10

    def test_nondeterminism_collected(self):
        """The interpreter handles choices anywhere, even outside normal form."""
        model = parse_model(NESTED_CHOICE_SOURCE)
        steps = interpret_step(model, (0, 0))
        assert {post for _, post in steps} == {(1, 1), (2, 2)}

    def test_ordered(self, cas):
        steps = ordered(interpret_step(cas, cas.init), [a.label for a in cas.actions])
        assert [event for event, _ in steps] == [Event("Lock"), Event("Close")]


class TestExplicitCheck:
    """Tests for explicit_check."""

    @pytest.mark.parametrize("depth", [0, 1, 2, 3])
    def test_planted_depth(self, planted_pair, depth):
        original, mutant = planted_pair(depth)
        result = explicit_check(original, mutant, max_depth=5)
        expected = NonConforming((depth, 0), (Event("inc"),) * depth, (Event("mark"), (depth, 1)))
        assert result == expected

    def test_conforming_below_depth(self, planted_pair):
        original, mutant = planted_pair(3)
        assert explicit_check(original, mutant, max_depth=2) == Conforming(2)

    def test_self_check(self, arith_model):
        assert explicit_check(arith_model, arith_model, max_depth=10) == Conforming(10)

    def test_lock_mutant(self, cas, lock_mutant):
        stats = ExplicitStats()
        result = explicit_check(cas, lock_mutant.model, max_depth=20, stats=stats)
        assert result == NonConforming((6, 0, 0, 0, 0, 0), (), (Event("Lock"), (3, 0, 0, 0, 0, 0)))
        assert stats.transitions_evaluated == 2 * (271 + 10)
        assert stats.states_expanded == 0

    def test_transition_budget(self, cas):
        stats = ExplicitStats()
        result = explicit_check(cas, cas, max_depth=20, budget=500, stats=stats)
        assert isinstance(result, Inconclusive)
        assert result.reason == "transitions"
        assert result.stats["transitions_evaluated"] > 500

    def test_stats_dict(self):
        stats = ExplicitStats(states_expanded=2, transitions_evaluated=9, elapsed=0.1234567)
        assert stats.to_dict() == {
            "states_expanded": 2,
            "transitions_evaluated": 9,
            "elapsed": 0.123457,
        }
