"""Abstract syntax of action-system models.

Every node is an immutable dataclass. Source locations are carried on every
node but excluded from equality, so two models parsed from differently laid
out text compare equal when their structure does.

Nodes are addressed by paths: tuples of child indexes starting at the model,
whose children are its actions. See ``children`` for the child order of each
node kind.
"""

from collections.abc import Iterator
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Optional, Union

from .exceptions import InvalidLocation


@dataclass(frozen=True)
class Location:
    """1-based line and column of a node's first token."""

    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


def _loc() -> Any:
    return field(default=None, compare=False, repr=False)


# =============================================================================
# OPERATORS
# =============================================================================


class CompareOp(str, Enum):
    """Comparison operators, valued by their concrete token."""

    EQ = "#="
    NE = "#\\="
    LT = "#<"
    LE = "#=<"
    GT = "#>"
    GE = "#>="


class ArithOp(str, Enum):
    ADD = "+"
    SUB = "-"
    MUL = "*"


# =============================================================================
# EXPRESSIONS
# =============================================================================


@dataclass(frozen=True)
class VarRef:
    name: str
    loc: Optional[Location] = _loc()


@dataclass(frozen=True)
class Const:
    value: int
    loc: Optional[Location] = _loc()


@dataclass(frozen=True)
class BinOp:
    op: ArithOp
    left: "Expr"
    right: "Expr"
    loc: Optional[Location] = _loc()


Expr = Union[VarRef, Const, BinOp]


# =============================================================================
# GUARDS
# =============================================================================


@dataclass(frozen=True)
class BoolConst:
    value: bool
    loc: Optional[Location] = _loc()


@dataclass(frozen=True)
class Compare:
    op: CompareOp
    left: Expr
    right: Expr
    loc: Optional[Location] = _loc()


@dataclass(frozen=True)
class Negation:
    operand: "Guard"
    loc: Optional[Location] = _loc()


@dataclass(frozen=True)
class Conjunction:
    left: "Guard"
    right: "Guard"
    loc: Optional[Location] = _loc()


@dataclass(frozen=True)
class Disjunction:
    left: "Guard"
    right: "Guard"
    loc: Optional[Location] = _loc()


Guard = Union[BoolConst, Compare, Negation, Conjunction, Disjunction]


# =============================================================================
# BODIES
# =============================================================================


@dataclass(frozen=True)
class Assign:
    target: str
    expr: Expr
    loc: Optional[Location] = _loc()


@dataclass(frozen=True)
class Guarded:
    guard: Guard
    body: "Body"
    loc: Optional[Location] = _loc()


@dataclass(frozen=True)
class Seq:
    first: "Body"
    second: "Body"
    loc: Optional[Location] = _loc()


@dataclass(frozen=True)
class Choice:
    left: "Body"
    right: "Body"
    loc: Optional[Location] = _loc()


Body = Union[Assign, Guarded, Seq, Choice]


# =============================================================================
# DECLARATIONS
# =============================================================================


@dataclass(frozen=True)
class TypeDef:
    """Integer range type ``type(name, X) :- X in lo..hi``."""

    name: str
    lo: int
    hi: int
    loc: Optional[Location] = _loc()

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1

    def contains(self, value: int) -> bool:
        return self.lo <= value <= self.hi


@dataclass(frozen=True)
class VarDecl:
    name: str
    type_name: str
    loc: Optional[Location] = _loc()


@dataclass(frozen=True)
class Param:
    """Action parameter or dood binding; ``type_name`` is None when unbound."""

    name: str
    type_name: Optional[str] = None
    loc: Optional[Location] = _loc()


@dataclass(frozen=True)
class Action:
    label: str
    params: tuple[Param, ...]
    guard: Guard
    body: Body
    loc: Optional[Location] = _loc()

    @property
    def arity(self) -> int:
        return len(self.params)

    @property
    def param_names(self) -> tuple[str, ...]:
        return tuple(p.name for p in self.params)


@dataclass(frozen=True)
class DoodEntry:
    """One alternative of the do-od block, e.g. ``[X:int]:'after'(X)``."""

    label: str
    params: tuple[Param, ...] = ()
    loc: Optional[Location] = _loc()


@dataclass(frozen=True)
class Model:
    types: tuple[TypeDef, ...]
    variables: tuple[VarDecl, ...]
    state_def: tuple[str, ...]
    init: tuple[int, ...]
    actions: tuple[Action, ...]
    dood: tuple[DoodEntry, ...]
    loc: Optional[Location] = _loc()

    def type_named(self, name: str) -> TypeDef:
        for t in self.types:
            if t.name == name:
                return t
        raise KeyError(name)

    def var_type(self, name: str) -> TypeDef:
        for v in self.variables:
            if v.name == name:
                return self.type_named(v.type_name)
        raise KeyError(name)

    def state_types(self) -> tuple[TypeDef, ...]:
        return tuple(self.var_type(name) for name in self.state_def)

    def widest_type(self) -> TypeDef:
        """The declared type with the largest range; first declared wins ties."""
        best = self.types[0]
        for t in self.types[1:]:
            if t.size > best.size:
                best = t
        return best

    def action_named(self, label: str) -> Action:
        for a in self.actions:
            if a.label == label:
                return a
        raise KeyError(label)

    def param_type(self, action: Action, name: str) -> TypeDef:
        for p in action.params:
            if p.name == name and p.type_name is not None:
                return self.type_named(p.type_name)
        return self.widest_type()

    def participating(self) -> list[tuple[int, Action, DoodEntry]]:
        """Actions listed in the do-od block, in action order."""
        entries = {e.label: e for e in self.dood}
        return [(i, a, entries[a.label]) for i, a in enumerate(self.actions) if a.label in entries]


Node = Union[Model, Action, Expr, Guard, Body]
Path = tuple[int, ...]


# =============================================================================
# NODE PATHS
# =============================================================================

_CHILD_FIELDS: dict[type, tuple[str, ...]] = {
    Action: ("guard", "body"),
    BinOp: ("left", "right"),
    Compare: ("left", "right"),
    Negation: ("operand",),
    Conjunction: ("left", "right"),
    Disjunction: ("left", "right"),
    Assign: ("expr",),
    Guarded: ("guard", "body"),
    Seq: ("first", "second"),
    Choice: ("left", "right"),
}


def children(node: Node) -> tuple[Node, ...]:
    """Ordered children of a node; leaves have none."""
    if isinstance(node, Model):
        return node.actions
    return tuple(getattr(node, name) for name in _CHILD_FIELDS.get(type(node), ()))


def walk(node: Node, path: Path = ()) -> Iterator[tuple[Path, Node]]:
    """Pre-order, left-to-right traversal yielding (path, node)."""
    yield path, node
    for i, child in enumerate(children(node)):
        yield from walk(child, path + (i,))


def node_at(model: Model, path: Path) -> Node:
    """Resolve a path against a model.

    Raises:
        InvalidLocation: If an index does not exist
    """
    node: Node = model
    for depth, index in enumerate(path):
        kids = children(node)
        if not 0 <= index < len(kids):
            raise InvalidLocation(f"path {list(path)} has no child {index} at depth {depth}")
        node = kids[index]
    return node


def parent_of(model: Model, path: Path) -> Optional[Node]:
    if not path:
        return None
    return node_at(model, path[:-1])


def replace_at(model: Model, path: Path, new: Node) -> Model:
    """Return a copy of ``model`` with the node at ``path`` swapped for ``new``."""
    if not path:
        raise InvalidLocation("cannot replace the model root")
    node_at(model, path)
    result = _replace(model, path, new)
    assert isinstance(result, Model)
    return result


def _replace(node: Node, path: Path, new: Node) -> Node:
    if not path:
        return new
    index, rest = path[0], path[1:]
    if isinstance(node, Model):
        actions = list(node.actions)
        replaced = _replace(actions[index], rest, new)
        assert isinstance(replaced, Action)
        actions[index] = replaced
        return replace(node, actions=tuple(actions))
    name = _CHILD_FIELDS[type(node)][index]
    return replace(node, **{name: _replace(getattr(node, name), rest, new)})  # type: ignore[arg-type]


# =============================================================================
# PRETTY PRINTING
# =============================================================================

_INDENT = "    "


def _quote(label: str) -> str:
    return f"'{label}'"


def format_expr(e: Expr, level: int = 0) -> str:
    """Render an expression; ``level`` is the binding strength of the context."""
    if isinstance(e, VarRef):
        return e.name
    if isinstance(e, Const):
        return str(e.value)
    own = 2 if e.op is ArithOp.MUL else 1
    text = f"{format_expr(e.left, own)} {e.op.value} {format_expr(e.right, own + 1)}"
    return f"({text})" if own < level else text


def format_guard(g: Guard, level: int = 0) -> str:
    if isinstance(g, BoolConst):
        return "true" if g.value else "false"
    if isinstance(g, Compare):
        return f"{format_expr(g.left)} {g.op.value} {format_expr(g.right)}"
    if isinstance(g, Negation):
        return f"\\+ ({format_guard(g.operand)})"
    own, token = (1, "\\/") if isinstance(g, Disjunction) else (2, "/\\")
    text = f"{format_guard(g.left, own)} {token} {format_guard(g.right, own + 1)}"
    return f"({text})" if own < level else text


def format_body(b: Body, level: int = 0) -> str:
    if isinstance(b, Assign):
        return f"{b.target} := {format_expr(b.expr)}"
    if isinstance(b, Guarded):
        text = f"({format_guard(b.guard)}) => {format_body(b.body, 3)}"
        own = 3
    elif isinstance(b, Seq):
        own = 2
        text = f"{format_body(b.first, 3)}; {format_body(b.second, 2)}"
    else:
        own = 1
        text = f"{format_body(b.left, 2)} [] {format_body(b.right, 1)}"
    return f"({text})" if own < level else text


def _choice_branches(b: Body) -> list[Body]:
    if isinstance(b, Choice):
        return [b.left] + _choice_branches(b.right)
    return [b]


def _format_action(a: Action) -> str:
    head = _quote(a.label)
    if a.params:
        head += "(" + ", ".join(p.name for p in a.params) + ")"
    branches = [format_body(br, 2) for br in _choice_branches(a.body)]
    inner = f"\n{_INDENT * 3}[] ".join(f"({br})" for br in branches)
    return (
        f"{_INDENT * 2}{head}::({format_guard(a.guard)}) => (\n"
        f"{_INDENT * 3}{inner}\n{_INDENT * 2})"
    )


def _format_dood_entry(e: DoodEntry) -> str:
    if not e.params:
        return _quote(e.label)
    bindings = ", ".join(f"{p.name}:{p.type_name}" for p in e.params)
    args = ", ".join(p.name for p in e.params)
    return f"[{bindings}]:{_quote(e.label)}({args})"


def pretty_print(m: Model) -> str:
    """Render a model in canonical concrete syntax.

    The output reparses to a structurally identical model.
    """
    lines = [f"type({t.name}, X) :- X in {t.lo}..{t.hi}." for t in m.types]
    lines += [f"var([{v.name}], {v.type_name})." for v in m.variables]
    lines.append(f"state_def([{', '.join(m.state_def)}]).")
    lines.append(f"init([{', '.join(str(v) for v in m.init)}]).")
    lines.append("")
    lines.append("as :-")
    lines.append(f"{_INDENT}actions(")
    lines.append(",\n".join(_format_action(a) for a in m.actions))
    lines.append(f"{_INDENT}),")
    lines.append(f"{_INDENT}dood(")
    if m.dood:
        entries = [_format_dood_entry(e) for e in m.dood]
        lines.append(f"{_INDENT * 2}" + f"\n{_INDENT * 2}[] ".join(entries))
    lines.append(f"{_INDENT}).")
    return "\n".join(lines) + "\n"
