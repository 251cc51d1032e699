"""Predicative step semantics: actions and systems as step formulas.

A step formula relates a pre-state ``v``, an observed event (label code and
argument slots) and a post-state ``v'``. Sequential composition is removed
by substituting the left operand's post-state expressions into the right
operand, so every formula is quantifier-free and negation stays syntactic.

Example:
    space = StepVarSpace.build(model)
    system = translate_system(model, space)
    print(formula_to_sexpr(system, space))
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Optional

from .exceptions import NormalFormViolation
from .formula import (
    FALSE,
    TRUE,
    Formula,
    LinExpr,
    Rel,
    atom,
    compare,
    conj,
    disj,
    negate,
    to_sexpr,
)
from .model import (
    Action,
    ArithOp,
    Assign,
    BinOp,
    Body,
    BoolConst,
    Choice,
    Compare,
    Conjunction,
    Const,
    Disjunction,
    DoodEntry,
    Expr,
    Guard,
    Guarded,
    Model,
    Negation,
    Seq,
    VarRef,
)
from .solver import FDVar, Problem

logger = logging.getLogger(__name__)

LABEL_VAR = "event_label"

State = tuple[int, ...]


@dataclass(frozen=True)
class Event:
    """An observed step: action label plus its actual arguments."""

    label: str
    args: tuple[int, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.label
        return f"{self.label}({', '.join(str(a) for a in self.args)})"

    def to_dict(self) -> dict[str, Any]:
        return {"label": self.label, "args": list(self.args)}


def label_order(*models: Model) -> tuple[str, ...]:
    """Action labels in first-appearance order across ``models``."""
    labels: list[str] = []
    for m in models:
        for a in m.actions:
            if a.label not in labels:
                labels.append(a.label)
    return tuple(labels)


# =============================================================================
# VARIABLE SPACE
# =============================================================================


@dataclass(frozen=True)
class StepVarSpace:
    """Solver variables for one step, registered as pre, label, args, post.

    With the pre-state pinned, the registration order makes solver
    solutions come out ordered by (label code, args, post-state).
    """

    state_names: tuple[str, ...]
    labels: tuple[str, ...]
    arities: tuple[int, ...]
    variables: tuple[FDVar, ...]

    @classmethod
    def build(cls, *models: Model) -> "StepVarSpace":
        """Space for ``models``; the first one fixes the state layout."""
        if not models:
            raise ValueError("StepVarSpace.build needs at least one model")
        base = models[0]
        labels = label_order(*models)
        arities: dict[str, int] = {}
        arg_lo, arg_hi = 0, 0
        for m in models:
            for a in m.actions:
                arities.setdefault(a.label, a.arity)
                for p in a.params:
                    t = m.param_type(a, p.name)
                    arg_lo, arg_hi = min(arg_lo, t.lo), max(arg_hi, t.hi)
        width = max(arities.values(), default=0)

        types = base.state_types()
        specs: list[tuple[str, int, int]] = []
        specs += [(name, t.lo, t.hi) for name, t in zip(base.state_def, types)]
        specs.append((LABEL_VAR, 0, max(len(labels) - 1, 0)))
        specs += [(f"arg{k}", arg_lo, arg_hi) for k in range(width)]
        specs += [(f"{name}'", t.lo, t.hi) for name, t in zip(base.state_def, types)]
        variables = tuple(FDVar(i, name, lo, hi) for i, (name, lo, hi) in enumerate(specs))
        return cls(
            state_names=base.state_def,
            labels=labels,
            arities=tuple(arities[label] for label in labels),
            variables=variables,
        )

    @property
    def size(self) -> int:
        return len(self.state_names)

    @property
    def width(self) -> int:
        return len(self.variables) - 2 * self.size - 1

    @property
    def pre(self) -> tuple[int, ...]:
        return tuple(range(self.size))

    @property
    def label(self) -> int:
        return self.size

    @property
    def args(self) -> tuple[int, ...]:
        return tuple(range(self.size + 1, self.size + 1 + self.width))

    @property
    def post(self) -> tuple[int, ...]:
        start = self.size + 1 + self.width
        return tuple(range(start, start + self.size))

    @property
    def step(self) -> tuple[int, ...]:
        """Event and post-state indexes, the projection used for enumeration."""
        return (self.label,) + self.args + self.post

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def code(self, label: str) -> int:
        return self.labels.index(label)

    def problem(self, formula: Formula) -> Problem:
        return Problem(self.variables, formula)

    def pin_pre(self, problem: Problem, state: State) -> Problem:
        return problem.pin(dict(zip(self.pre, state)))

    def decode_step(self, values: tuple[int, ...]) -> tuple[Event, State]:
        """Turn a projection over ``step`` into (event, post-state)."""
        label = self.labels[values[0]]
        arity = self.arities[values[0]]
        args = tuple(values[1 : 1 + arity])
        post = tuple(values[1 + self.width :])
        return Event(label, args), post

    def decode(self, solution: dict[str, int]) -> tuple[State, Event, State]:
        """Split a full solver solution into (pre-state, event, post-state)."""
        values = [solution[v.name] for v in self.variables]
        pre = tuple(values[i] for i in self.pre)
        event, post = self.decode_step(tuple(values[i] for i in self.step))
        return pre, event, post

    def encode_step(self, event: Event, post: State) -> tuple[int, ...]:
        args = event.args + (0,) * (self.width - len(event.args))
        return (self.code(event.label),) + args + tuple(post)


# =============================================================================
# TRANSLATION
# =============================================================================

Env = dict[str, LinExpr]


def _expr(e: Expr, env: Env) -> LinExpr:
    if isinstance(e, VarRef):
        return env[e.name]
    if isinstance(e, Const):
        return LinExpr.constant(e.value)
    left, right = _expr(e.left, env), _expr(e.right, env)
    if e.op is ArithOp.ADD:
        return left + right
    if e.op is ArithOp.SUB:
        return left - right
    return left * right


def _guard(g: Guard, env: Env) -> Formula:
    if isinstance(g, BoolConst):
        return TRUE if g.value else FALSE
    if isinstance(g, Compare):
        return compare(g.op, _expr(g.left, env), _expr(g.right, env))
    if isinstance(g, Negation):
        return negate(_guard(g.operand, env))
    if isinstance(g, Conjunction):
        return conj(_guard(g.left, env), _guard(g.right, env))
    assert isinstance(g, Disjunction)
    return disj(_guard(g.left, env), _guard(g.right, env))


def _bounds(expr: LinExpr, space: StepVarSpace) -> tuple[int, int]:
    lo = hi = expr.const
    for mono, coef in expr.terms:
        mlo = mhi = 1
        for v in mono:
            var = space.variables[v]
            products = (mlo * var.lo, mlo * var.hi, mhi * var.lo, mhi * var.hi)
            mlo, mhi = min(products), max(products)
        lo += min(coef * mlo, coef * mhi)
        hi += max(coef * mlo, coef * mhi)
    return lo, hi


def _in_range(expr: LinExpr, lo: int, hi: int, space: StepVarSpace) -> Formula:
    """``lo <= expr <= hi``, folded away when the variable domains already imply it."""
    elo, ehi = _bounds(expr, space)
    parts = []
    if elo < lo:
        parts.append(atom(Rel.LE, LinExpr.constant(lo) - expr))
    if ehi > hi:
        parts.append(atom(Rel.LE, expr.shifted(-hi)))
    return conj(*parts)


Branch = tuple[tuple[Formula, ...], Env]


def _body(b: Body, env: Env, space: StepVarSpace, label: str) -> list[Branch]:
    if isinstance(b, Assign):
        value = _expr(b.expr, env)
        target = space.variables[space.state_names.index(b.target)]
        new_env = dict(env)
        new_env[b.target] = value
        return [((_in_range(value, target.lo, target.hi, space),), new_env)]
    if isinstance(b, Guarded):
        cond = _guard(b.guard, env)
        return [((cond,) + c, e) for c, e in _body(b.body, env, space, label)]
    if isinstance(b, Seq):
        first = _body(b.first, env, space, label)
        if len(first) != 1:
            raise NormalFormViolation(
                f"action '{label}': non-deterministic choice on the left of ';'",
                b.loc,
            )
        cond, mid = first[0]
        return [(cond + c, e) for c, e in _body(b.second, mid, space, label)]
    assert isinstance(b, Choice)
    return _body(b.left, env, space, label) + _body(b.right, env, space, label)


@lru_cache(maxsize=4096)
def translate_action(a: Action, space: StepVarSpace) -> Formula:
    """Step formula of one action: label, unused-slot pins, guard and body.

    Every branch fixes all post variables: assigned ones to their final
    expression, the rest to their pre value.

    Raises:
        NormalFormViolation: If a choice sits on the left of ';'
    """
    env: Env = {name: LinExpr.var(i) for name, i in zip(space.state_names, space.pre)}
    for k, p in enumerate(a.params):
        env[p.name] = LinExpr.var(space.args[k])

    head = [atom(Rel.EQ, LinExpr.var(space.label).shifted(-space.code(a.label)))]
    head += [atom(Rel.EQ, LinExpr.var(i)) for i in space.args[a.arity :]]

    branches = []
    for cond, final in _body(a.body, env, space, a.label):
        frame = [
            atom(Rel.EQ, LinExpr.var(post) - final[name])
            for name, post in zip(space.state_names, space.post)
        ]
        branches.append(conj(*cond, *frame))
    return conj(*head, _guard(a.guard, env), disj(*branches))


def binding_constraint(m: Model, entry: DoodEntry, space: StepVarSpace) -> Formula:
    """Argument slot ranges imposed by a do-od binding such as ``[X:int]``."""
    parts = []
    for k, p in enumerate(entry.params):
        t = m.type_named(p.type_name) if p.type_name else m.widest_type()
        var = LinExpr.var(space.args[k])
        parts.append(_in_range(var, t.lo, t.hi, space))
    return conj(*parts)


def translate_entry(m: Model, a: Action, entry: DoodEntry, space: StepVarSpace) -> Formula:
    return conj(translate_action(a, space), binding_constraint(m, entry, space))


def translate_system(m: Model, space: Optional[StepVarSpace] = None) -> Formula:
    """Disjunction of every do-od entry's action formula.

    Raises:
        NormalFormViolation: If any participating action is not in normal form
    """
    space = space or StepVarSpace.build(m)
    parts = [translate_entry(m, a, entry, space) for _, a, entry in m.participating()]
    formula = disj(*parts)
    logger.debug(f"Translated system with {len(parts)} action(s)")
    return formula


def formula_to_sexpr(f: Formula, space: StepVarSpace) -> str:
    """Debug dump in s-expression form, variables shown by name."""
    return to_sexpr(f, space.names)
