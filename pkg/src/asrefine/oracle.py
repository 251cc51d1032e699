"""Reference interpreter and explicit-state conformance check.

The interpreter walks the AST directly and enumerates every do-od parameter
value over its full type range, so its cost grows with parameter domains.
It serves as the correctness oracle for the symbolic engine and as the
explicit baseline it is compared against.
"""

import itertools
import logging
import time
from collections import deque
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Any, Optional

from .exceptions import ResourceLimit
from .model import (
    ArithOp,
    Assign,
    BinOp,
    Body,
    BoolConst,
    Choice,
    Compare,
    CompareOp,
    Conjunction,
    Const,
    Disjunction,
    Expr,
    Guard,
    Guarded,
    Model,
    Negation,
    Seq,
    TypeDef,
)
from .reachability import Conforming, Inconclusive, NonConforming, SearchNode, Step, Verdict
from .semantics import Event, State, label_order

logger = logging.getLogger(__name__)

DEFAULT_TRANSITION_BUDGET = 1_000_000

_COMPARE = {
    CompareOp.EQ: lambda a, b: a == b,
    CompareOp.NE: lambda a, b: a != b,
    CompareOp.LT: lambda a, b: a < b,
    CompareOp.LE: lambda a, b: a <= b,
    CompareOp.GT: lambda a, b: a > b,
    CompareOp.GE: lambda a, b: a >= b,
}


@dataclass
class ExplicitStats:
    """Work done by the explicit engine."""

    states_expanded: int = 0
    transitions_evaluated: int = 0
    elapsed: float = 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "states_expanded": self.states_expanded,
            "transitions_evaluated": self.transitions_evaluated,
            "elapsed": round(self.elapsed, 6),
        }


# =============================================================================
# INTERPRETER
# =============================================================================


def eval_expr(e: Expr, env: dict[str, int]) -> int:
    if isinstance(e, Const):
        return e.value
    if isinstance(e, BinOp):
        left, right = eval_expr(e.left, env), eval_expr(e.right, env)
        if e.op is ArithOp.ADD:
            return left + right
        if e.op is ArithOp.SUB:
            return left - right
        return left * right
    return env[e.name]


def eval_guard(g: Guard, env: dict[str, int]) -> bool:
    if isinstance(g, BoolConst):
        return g.value
    if isinstance(g, Compare):
        return bool(_COMPARE[g.op](eval_expr(g.left, env), eval_expr(g.right, env)))
    if isinstance(g, Negation):
        return not eval_guard(g.operand, env)
    if isinstance(g, Conjunction):
        return eval_guard(g.left, env) and eval_guard(g.right, env)
    assert isinstance(g, Disjunction)
    return eval_guard(g.left, env) or eval_guard(g.right, env)


def execute(b: Body, env: dict[str, int], types: dict[str, TypeDef]) -> list[dict[str, int]]:
    """All environments ``b`` can end in; assignments leaving their type's range are infeasible."""
    if isinstance(b, Assign):
        value = eval_expr(b.expr, env)
        if not types[b.target].contains(value):
            return []
        result = dict(env)
        result[b.target] = value
        return [result]
    if isinstance(b, Guarded):
        return execute(b.body, env, types) if eval_guard(b.guard, env) else []
    if isinstance(b, Seq):
        return [
            final for mid in execute(b.first, env, types) for final in execute(b.second, mid, types)
        ]
    assert isinstance(b, Choice)
    return execute(b.left, env, types) + execute(b.right, env, types)


def interpret_step(m: Model, s: State, stats: Optional[ExplicitStats] = None) -> frozenset[Step]:
    """
    Every (event, post-state) the system can take from ``s``.

    Each do-od entry is tried with every combination of its parameter
    values; each tried combination counts as one evaluated transition.
    """
    types = {name: m.var_type(name) for name in m.state_def}
    steps: set[Step] = set()
    for _, action, entry in m.participating():
        ranges = []
        for p in entry.params:
            t = m.type_named(p.type_name) if p.type_name else m.widest_type()
            ranges.append(range(t.lo, t.hi + 1))
        for args in itertools.product(*ranges):
            if stats is not None:
                stats.transitions_evaluated += 1
            env = dict(zip(m.state_def, s))
            env.update(zip(action.param_names, args))
            if not eval_guard(action.guard, env):
                continue
            event = Event(action.label, tuple(args))
            for final in execute(action.body, env, types):
                steps.add((event, tuple(final[n] for n in m.state_def)))
    return frozenset(steps)


def step_order_key(labels: Sequence[str]) -> Any:
    """Sort key ordering steps by label position, arguments, then post-state."""
    codes = {label: i for i, label in enumerate(labels)}

    def key(step: Step) -> tuple[int, tuple[int, ...], State]:
        event, post = step
        return codes[event.label], event.args, post

    return key


def ordered(steps: Iterable[Step], labels: Sequence[str]) -> list[Step]:
    return sorted(steps, key=step_order_key(labels))


# =============================================================================
# EXPLICIT CHECK
# =============================================================================


def explicit_check(
    orig: Model,
    mut: Model,
    max_depth: int,
    budget: int = DEFAULT_TRANSITION_BUDGET,
    timeout: Optional[float] = None,
    stats: Optional[ExplicitStats] = None,
) -> Verdict:
    """Breadth-first search of the original's state graph for a state where
    the mutant's successors are not contained in the original's.

    The search order, depth bound and visited-set handling are those of
    ``reachability.reach_non_refine``, so both engines report the same
    unsafe state and trace. Exceeding ``budget`` evaluated transitions or
    ``timeout`` seconds yields ``Inconclusive``.
    """
    stats = stats if stats is not None else ExplicitStats()
    labels = label_order(orig, mut)
    key = step_order_key(labels)
    started = time.monotonic()
    stop_at = None if timeout is None else started + timeout

    def expand(model: Model, s: State) -> frozenset[Step]:
        result = interpret_step(model, s, stats)
        if stats.transitions_evaluated > budget:
            raise ResourceLimit("transitions", stats.to_dict())
        if stop_at is not None and time.monotonic() > stop_at:
            raise ResourceLimit("timeout", stats.to_dict())
        return result

    known: dict[State, frozenset[Step]] = {}

    def witness(s: State) -> Optional[Step]:
        known[s] = expand(orig, s)
        extra = expand(mut, s) - known[s]
        return min(extra, key=key) if extra else None

    try:
        start: State = tuple(orig.init)
        found = witness(start)
        if found is not None:
            return NonConforming(start, (), found)

        visited = {start}
        frontier = deque([SearchNode(start)])
        while frontier:
            node = frontier.popleft()
            if len(node.trace) >= max_depth:
                continue
            stats.states_expanded += 1
            for event, state in sorted(known.pop(node.state), key=key):
                if state in visited:
                    continue
                trace = node.trace + (event,)
                found = witness(state)
                if found is not None:
                    return NonConforming(state, trace, found)
                visited.add(state)
                frontier.append(SearchNode(state, trace))
        return Conforming(max_depth)
    except ResourceLimit as e:
        logger.warning(f"Explicit check gave up: {e}")
        return Inconclusive(e.reason, e.stats)
    finally:
        stats.elapsed += time.monotonic() - started
