"""Bounded breadth-first search for a reachable unsafe state.

States of the original system are explored from ``init`` in FIFO order.
Every newly reached state is tested against the non-refinement constraint
before it is marked visited; the first state with a solution is unsafe and
is returned together with the shortest trace that reaches it and the
offending step.
"""

import logging
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any, Optional, Union

from .exceptions import ResourceLimit
from .formula import Formula
from .model import Model
from .refinement import NonRefinementConstraint
from .semantics import Event, State, StepVarSpace, translate_system
from .solver import FDSolver

logger = logging.getLogger(__name__)

DEFAULT_MAX_DEPTH = 20

Step = tuple[Event, State]


@dataclass(frozen=True)
class SearchNode:
    """A reached state with the shortest known trace leading to it."""

    state: State
    trace: tuple[Event, ...] = ()


# =============================================================================
# VERDICTS
# =============================================================================


@dataclass(frozen=True)
class NonConforming:
    """An unsafe state reachable in the original, and the step only the mutant can take."""

    unsafe: State
    trace: tuple[Event, ...]
    witness: Step

    def to_dict(self) -> dict[str, Any]:
        event, state = self.witness
        return {
            "unsafe_state": list(self.unsafe),
            "trace": [e.to_dict() for e in self.trace],
            "witness": {"event": event.to_dict(), "state": list(state)},
        }


@dataclass(frozen=True)
class Conforming:
    """No unsafe state within ``depth`` steps of init."""

    depth: int


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    stats: dict[str, Any] = field(default_factory=dict, compare=False)


Verdict = Union[NonConforming, Conforming, Inconclusive]


# =============================================================================
# STEPS
# =============================================================================


class StepOracle:
    """Symbolic successor and unsafe-state queries for one original model.

    Holds the translated system so a search does not retranslate it for
    every state.
    """

    def __init__(
        self,
        orig: Model,
        space: Optional[StepVarSpace] = None,
        solver: Optional[FDSolver] = None,
    ) -> None:
        self.orig = orig
        self.space = space or StepVarSpace.build(orig)
        self.solver = solver or FDSolver()
        self.system: Formula = translate_system(orig, self.space)

    def successors(self, s: State) -> list[Step]:
        """
        Every distinct (event, post-state) the original can take from ``s``,
        ordered by label code, arguments, then post-state.

        Raises:
            ResourceLimit: If the solver exhausts its limits
        """
        problem = self.space.pin_pre(self.space.problem(self.system), s)
        found = self.solver.enumerate_values(problem, self.space.step)
        return [self.space.decode_step(values) for values in found]

    def check_unsafe(self, c: NonRefinementConstraint, s: State) -> Optional[Step]:
        """
        The smallest witness step from ``s``, or None when ``s`` is safe.

        Raises:
            ResourceLimit: If the solver exhausts its limits
        """
        return check_unsafe(c, s, self.solver)


def successors(
    orig: Model, s: State, space: Optional[StepVarSpace] = None, solver: Optional[FDSolver] = None
) -> list[Step]:
    return StepOracle(orig, space, solver).successors(s)


def check_unsafe(
    c: NonRefinementConstraint, s: State, solver: Optional[FDSolver] = None
) -> Optional[Step]:
    """Pin the pre-state to ``s`` and solve; the solution's event and post-state are the witness."""
    solver = solver or FDSolver()
    solution = solver.solve(c.space.pin_pre(c.problem(), s))
    if solution is None:
        return None
    _, event, post = c.space.decode(solution)
    return event, post


# =============================================================================
# SEARCH
# =============================================================================


def reach_non_refine(
    orig: Model,
    c: NonRefinementConstraint,
    max_depth: int = DEFAULT_MAX_DEPTH,
    init: Optional[State] = None,
    solver: Optional[FDSolver] = None,
    oracle: Optional[StepOracle] = None,
) -> Verdict:
    """Breadth-first search for an unsafe state within ``max_depth`` steps.

    Only nodes whose trace is shorter than ``max_depth`` are expanded, and
    each state is tested once, when first reached. Resource exhaustion in
    any solver call ends the search with ``Inconclusive``.
    """
    if max_depth < 0:
        raise ValueError(f"max_depth must be >= 0, got {max_depth}")
    if oracle is None:
        oracle = StepOracle(orig, c.space, solver)
    start: State = tuple(init if init is not None else orig.init)

    try:
        witness = oracle.check_unsafe(c, start)
        if witness is not None:
            return NonConforming(start, (), witness)

        visited = {start}
        frontier = deque([SearchNode(start)])
        while frontier:
            node = frontier.popleft()
            if len(node.trace) >= max_depth:
                continue
            for event, state in oracle.successors(node.state):
                if state in visited:
                    continue
                trace = node.trace + (event,)
                witness = oracle.check_unsafe(c, state)
                if witness is not None:
                    logger.debug(f"Unsafe state {list(state)} at depth {len(trace)}")
                    return NonConforming(state, trace, witness)
                visited.add(state)
                frontier.append(SearchNode(state, trace))
        logger.debug(f"Explored {len(visited)} state(s) without finding an unsafe one")
        return Conforming(max_depth)
    except ResourceLimit as e:
        logger.warning(f"Reachability search gave up: {e}")
        return Inconclusive(e.reason, e.stats)


# =============================================================================
# REPLAY
# =============================================================================


def replay_trace(
    model: Model, trace: Sequence[Event], init: Optional[State] = None
) -> set[State]:
    """
    States the reference interpreter can end in after following ``trace`` from init.

    An event may lead to several post-states, so replay tracks a set.
    The result is empty when some event of the trace is not enabled.
    """
    from .oracle import interpret_step

    states: set[State] = {tuple(init if init is not None else model.init)}
    for event in trace:
        states = {post for s in states for e, post in interpret_step(model, s) if e == event}
        if not states:
            break
    return states
