"""Static checks for parsed models.

``validate_model`` either returns a model satisfying every static rule or
raises; it never hands back a partially checked model.
``check_normal_form`` reports, without raising, every place where a
non-deterministic choice is nested under something other than another
choice or the body root.
"""

import logging
from dataclasses import dataclass, replace
from typing import Optional

from .exceptions import (
    ArityMismatch,
    DuplicateName,
    InitOutOfBounds,
    InvalidAssignment,
    InvalidDomain,
    UndeclaredType,
    UndeclaredVariable,
    UndefinedAction,
)
from .model import (
    Action,
    Assign,
    Choice,
    Location,
    Model,
    Node,
    Path,
    Seq,
    VarRef,
    children,
    walk,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Diagnostic:
    """A finding attached to a model location."""

    severity: str
    message: str
    location: Optional[Location]
    path: Path = ()

    def format(self, filename: str = "<input>") -> str:
        if self.location is None:
            return f"{filename}: {self.severity}: {self.message}"
        loc = self.location
        return f"{filename}:{loc.line}:{loc.column}: {self.severity}: {self.message}"


# =============================================================================
# VALIDATION
# =============================================================================


def _check_declarations(m: Model) -> None:
    seen_types: set[str] = set()
    for t in m.types:
        if t.name in seen_types:
            raise DuplicateName(f"type '{t.name}' declared twice", t.loc)
        seen_types.add(t.name)
        if t.lo > t.hi:
            raise InvalidDomain(f"type '{t.name}' has empty range {t.lo}..{t.hi}", t.loc)

    seen_vars: set[str] = set()
    for v in m.variables:
        if v.name in seen_vars:
            raise DuplicateName(f"variable '{v.name}' declared twice", v.loc)
        seen_vars.add(v.name)
        if v.type_name not in seen_types:
            raise UndeclaredType(f"variable '{v.name}' has undeclared type '{v.type_name}'", v.loc)

    listed: set[str] = set()
    for name in m.state_def:
        if name not in seen_vars:
            raise UndeclaredVariable(f"state_def lists undeclared variable '{name}'", m.loc)
        if name in listed:
            raise DuplicateName(f"state_def lists '{name}' twice", m.loc)
        listed.add(name)

    if len(m.init) != len(m.state_def):
        raise ArityMismatch(
            f"init has {len(m.init)} values but state_def has {len(m.state_def)} variables",
            m.loc,
        )
    for name, value in zip(m.state_def, m.init):
        t = m.var_type(name)
        if not t.contains(value):
            raise InitOutOfBounds(
                f"init value {value} for '{name}' is outside {t.name} {t.lo}..{t.hi}", m.loc
            )


def _unknown_variable(name: str, declared: set[str]) -> str:
    if name in declared:
        return f"variable '{name}' which is not in state_def"
    return f"undeclared variable '{name}'"


def _check_references(
    node: Node, state: set[str], params: set[str], declared: set[str], label: str
) -> None:
    for _, sub in walk(node):
        if isinstance(sub, VarRef) and sub.name not in state and sub.name not in params:
            raise UndeclaredVariable(
                f"action '{label}' references {_unknown_variable(sub.name, declared)}", sub.loc
            )
        if isinstance(sub, Assign):
            if sub.target in params:
                raise InvalidAssignment(
                    f"action '{label}' assigns to parameter '{sub.target}'", sub.loc
                )
            if sub.target not in state:
                target = _unknown_variable(sub.target, declared)
                raise UndeclaredVariable(f"action '{label}' assigns to {target}", sub.loc)


def _bind_actions(m: Model) -> tuple[Action, ...]:
    type_names = {t.name for t in m.types}
    state = set(m.state_def)
    declared = {v.name for v in m.variables}
    labels: set[str] = set()
    for a in m.actions:
        if a.label in labels:
            raise DuplicateName(f"action '{a.label}' defined twice", a.loc)
        labels.add(a.label)

    entries = {}
    for e in m.dood:
        if e.label not in labels:
            raise UndefinedAction(f"dood names undefined action '{e.label}'", e.loc)
        if e.label in entries:
            raise DuplicateName(f"dood lists action '{e.label}' twice", e.loc)
        for p in e.params:
            if p.type_name not in type_names:
                raise UndeclaredType(
                    f"dood binding '{p.name}' has undeclared type '{p.type_name}'", p.loc
                )
        entries[e.label] = e

    bound: list[Action] = []
    for a in m.actions:
        names = [p.name for p in a.params]
        for p in a.params:
            if names.count(p.name) > 1:
                raise DuplicateName(f"action '{a.label}' repeats parameter '{p.name}'", p.loc)
            if p.name in state:
                raise DuplicateName(
                    f"parameter '{p.name}' of '{a.label}' shadows a state variable", p.loc
                )
        entry = entries.get(a.label)
        if entry is not None:
            if len(entry.params) != a.arity:
                raise ArityMismatch(
                    f"dood passes {len(entry.params)} arguments to '{a.label}' "
                    f"which takes {a.arity}",
                    entry.loc,
                )
            a = replace(
                a,
                params=tuple(
                    replace(p, type_name=b.type_name) for p, b in zip(a.params, entry.params)
                ),
            )
        _check_references(a.guard, state, set(names), declared, a.label)
        _check_references(a.body, state, set(names), declared, a.label)
        bound.append(a)
    return tuple(bound)


def validate_model(m: Model) -> Model:
    """Check every static rule and bind parameter types from the do-od block.

    Raises:
        DuplicateName, UndeclaredVariable, UndeclaredType, ArityMismatch,
        UndefinedAction, InitOutOfBounds, InvalidDomain, InvalidAssignment
    """
    _check_declarations(m)
    return replace(m, actions=_bind_actions(m))


# =============================================================================
# NORMAL FORM
# =============================================================================


def _nf_visit(
    node: Node,
    path: Path,
    parent: Optional[Node],
    choice_allowed: bool,
    label: str,
    out: list[Diagnostic],
) -> None:
    if isinstance(node, Choice):
        if not choice_allowed:
            where = parent if parent is not None else node
            context = "left of ';'" if isinstance(parent, Seq) and path[-1] == 0 else "nested"
            out.append(
                Diagnostic(
                    "error",
                    f"action '{label}': {context} non-deterministic choice; "
                    "choice must be the outermost operator of an action body",
                    getattr(where, "loc", None),
                    path[:-1],
                )
            )
        for i, child in enumerate(children(node)):
            _nf_visit(child, path + (i,), node, True, label, out)
        return
    for i, child in enumerate(children(node)):
        _nf_visit(child, path + (i,), node, False, label, out)


def check_normal_form(m: Model) -> list[Diagnostic]:
    """Report every choice that is not at an action body's root or under another choice."""
    diagnostics: list[Diagnostic] = []
    for index, action in enumerate(m.actions):
        _nf_visit(action.body, (index, 1), action, True, action.label, diagnostics)
    if diagnostics:
        logger.debug(f"Normal form check found {len(diagnostics)} violation(s)")
    return diagnostics

