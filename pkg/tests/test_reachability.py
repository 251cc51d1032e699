"""Tests for the bounded search for reachable unsafe states."""

import pytest

from asrefine.checker import check_mutant
from asrefine.fixtures import load_fixture
from asrefine.mutation import enumerate_mutants
from asrefine.oracle import interpret_step
from asrefine.parser import parse_model
from asrefine.reachability import (
    Conforming,
    Inconclusive,
    NonConforming,
    StepOracle,
    check_unsafe,
    reach_non_refine,
    replay_trace,
    successors,
)
from asrefine.refinement import find_mutated_action
from asrefine.semantics import Event
from asrefine.solver import FDSolver, SolverLimits

from .conftest import ARITH_SOURCE


def planted_constraint(planted_pair, depth):
    original, mutant = planted_pair(depth)
    candidate = find_mutated_action(original, mutant)
    assert candidate is not None
    return original, candidate[1]


class TestPlantedDepth:
    """Counters whose only difference is reachable after exactly ``depth`` steps."""

    @pytest.mark.parametrize("depth", [0, 1, 2, 3])
    def test_found_at_depth(self, planted_pair, depth):
        original, constraint = planted_constraint(planted_pair, depth)
        result = reach_non_refine(original, constraint, max_depth=5)
        assert isinstance(result, NonConforming)
        assert result.unsafe == (depth, 0)
        assert result.trace == (Event("inc"),) * depth
        assert result.witness == (Event("mark"), (depth, 1))

    @pytest.mark.parametrize("depth", [1, 2, 3])
    def test_conforming_below_depth(self, planted_pair, depth):
        original, constraint = planted_constraint(planted_pair, depth)
        assert reach_non_refine(original, constraint, max_depth=depth - 1) == Conforming(depth - 1)

    def test_exact_bound_suffices(self, planted_pair):
        original, constraint = planted_constraint(planted_pair, 3)
        assert isinstance(reach_non_refine(original, constraint, max_depth=3), NonConforming)

    def test_trace_replays(self, planted_pair):
        original, constraint = planted_constraint(planted_pair, 2)
        result = reach_non_refine(original, constraint, max_depth=5)
        assert result.unsafe in replay_trace(original, result.trace)

    def test_negative_depth_rejected(self, planted_pair):
        original, constraint = planted_constraint(planted_pair, 0)
        with pytest.raises(ValueError):
            reach_non_refine(original, constraint, max_depth=-1)

    def test_custom_start_state(self, planted_pair):
        original, constraint = planted_constraint(planted_pair, 3)
        result = reach_non_refine(original, constraint, max_depth=1, init=(2, 0))
        assert isinstance(result, NonConforming)
        assert result.trace == (Event("inc"),)

    def test_result_dict(self, planted_pair):
        original, constraint = planted_constraint(planted_pair, 1)
        data = reach_non_refine(original, constraint).to_dict()
        assert data == {
            "unsafe_state": [1, 0],
            "trace": [{"label": "inc", "args": []}],
            "witness": {"event": {"label": "mark", "args": []}, "state": [1, 1]},
        }


class TestCarAlarm:
    """The Lock mutant misbehaves in the initial state."""

    def test_unsafe_init(self, cas, lock_mutant):
        _, constraint = find_mutated_action(cas, lock_mutant.model)
        result = reach_non_refine(cas, constraint)
        assert result == NonConforming((6, 0, 0, 0, 0, 0), (), (Event("Lock"), (3, 0, 0, 0, 0, 0)))

    def test_check_unsafe_elsewhere(self, cas, lock_mutant):
        """From OpenAndLocked the mutant's Lock still reaches ClosedAndLocked."""
        _, constraint = find_mutated_action(cas, lock_mutant.model)
        witness = check_unsafe(constraint, (5, 0, 0, 0, 0, 0))
        assert witness == (Event("Lock"), (3, 0, 0, 0, 0, 0))

    def test_safe_state(self, cas, lock_mutant):
        """In ClosedAndUnlocked with fromArmed 0 both versions step to ClosedAndLocked."""
        _, constraint = find_mutated_action(cas, lock_mutant.model)
        assert check_unsafe(constraint, (4, 0, 0, 0, 0, 0)) is None


def assert_witness_separates(original, mutant, result):
    """The witness is a step of the mutant that the original cannot take."""
    assert isinstance(result, NonConforming)
    assert result.witness in interpret_step(mutant, result.unsafe)
    assert result.witness not in interpret_step(original, result.unsafe)
    assert result.unsafe in replay_trace(original, result.trace)


class TestWitness:
    """Witness steps separate the mutant from the original at the unsafe state."""

    @pytest.mark.parametrize("depth", [0, 1, 2, 3])
    def test_planted(self, planted_pair, depth):
        original, mutant = planted_pair(depth)
        _, constraint = find_mutated_action(original, mutant)
        assert_witness_separates(original, mutant, reach_non_refine(original, constraint))

    def test_lock(self, cas, lock_mutant):
        _, constraint = find_mutated_action(cas, lock_mutant.model)
        assert_witness_separates(cas, lock_mutant.model, reach_non_refine(cas, constraint))

    def test_parameterized(self, arith_model):
        mutant = parse_model(ARITH_SOURCE.replace("y := x * 2", "y := x * 3"))
        _, constraint = find_mutated_action(arith_model, mutant)
        assert_witness_separates(arith_model, mutant, reach_non_refine(arith_model, constraint))

    @pytest.mark.slow
    def test_every_nonconforming_cas_mutant(self):
        original = load_fixture("cas_1", param_max=30)
        found = 0
        for m in enumerate_mutants(original):
            outcome = check_mutant(original, m.model)
            if outcome.verdict == "nonconforming":
                assert_witness_separates(original, m.model, outcome.result)
                found += 1
        assert found > 0


class TestSuccessors:
    """Tests for StepOracle and replay."""

    def test_oracle_reuses_translation(self, cas):
        oracle = StepOracle(cas)
        first = oracle.successors(cas.init)
        assert oracle.successors(cas.init) == first
        assert successors(cas, cas.init) == first

    def test_replay_follows_events(self, cas):
        trace = (Event("Close"), Event("Lock"), Event("after", (20,)))
        assert replay_trace(cas, trace) == {(2, 0, 0, 1, 0, 0)}

    def test_replay_disabled_event(self, cas):
        assert replay_trace(cas, (Event("Unlock"),)) == set()


class TestArithmetic:
    """A mutant of 'mul' that triples instead of doubling."""

    @pytest.fixture
    def tripled(self, arith_model):
        mutant = parse_model(ARITH_SOURCE.replace("y := x * 2", "y := x * 3"))
        index, constraint = find_mutated_action(arith_model, mutant)
        assert arith_model.actions[index].label == "mul"
        return constraint

    def test_parameterized_trace(self, arith_model, tripled):
        result = reach_non_refine(arith_model, tripled)
        assert result == NonConforming((1, 1), (Event("add", (1,)),), (Event("mul"), (1, 3)))

    def test_solver_limit_is_inconclusive(self, arith_model, tripled):
        """Enumerating several successors needs more than the root node."""
        solver = FDSolver(SolverLimits(node_budget=1))
        result = reach_non_refine(arith_model, tripled, solver=solver)
        assert isinstance(result, Inconclusive)
        assert result.reason == "nodes"
