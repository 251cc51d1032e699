"""Quantifier-free step formulas in negation normal form.

A formula is a tree of ``And``/``Or`` nodes over ``Atom`` leaves. Every atom
compares an integer polynomial with zero using one of three relations
(``=``, ``!=``, ``<=``); strict and reversed comparisons are rewritten into
these on construction, which makes negation a purely syntactic operation.

Variables are integer indexes into a variable space owned by the caller
(see ``semantics.StepVarSpace``).

Example:
    x, y = LinExpr.var(0), LinExpr.var(1)
    f = conj(compare(CompareOp.EQ, x, LinExpr.constant(3)), compare(CompareOp.LT, y, x))
    evaluate(negate(f), [3, 5])  # True
"""

from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Union

from .model import CompareOp

Monomial = tuple[int, ...]


class Rel(str, Enum):
    """Relation between an atom's polynomial and zero."""

    EQ = "="
    NE = "!="
    LE = "<="


# =============================================================================
# POLYNOMIALS
# =============================================================================


@dataclass(frozen=True)
class LinExpr:
    """Integer polynomial ``sum(coef * monomial) + const``.

    Monomials are sorted tuples of variable indexes. Products of two
    variables only appear when a model multiplies variables, so in practice
    almost every expression is linear.
    """

    terms: tuple[tuple[Monomial, int], ...] = ()
    const: int = 0

    @staticmethod
    def var(index: int) -> "LinExpr":
        return LinExpr((((index,), 1),), 0)

    @staticmethod
    def constant(value: int) -> "LinExpr":
        return LinExpr((), value)

    @staticmethod
    def _build(coefs: dict[Monomial, int], const: int) -> "LinExpr":
        return LinExpr(tuple(sorted((m, c) for m, c in coefs.items() if c != 0)), const)

    def __add__(self, other: "LinExpr") -> "LinExpr":
        coefs = dict(self.terms)
        for m, c in other.terms:
            coefs[m] = coefs.get(m, 0) + c
        return LinExpr._build(coefs, self.const + other.const)

    def __neg__(self) -> "LinExpr":
        return LinExpr(tuple((m, -c) for m, c in self.terms), -self.const)

    def __sub__(self, other: "LinExpr") -> "LinExpr":
        return self + (-other)

    def __mul__(self, other: "LinExpr") -> "LinExpr":
        coefs: dict[Monomial, int] = {}
        left = list(self.terms) + [((), self.const)]
        right = list(other.terms) + [((), other.const)]
        const = 0
        for m1, c1 in left:
            for m2, c2 in right:
                mono = tuple(sorted(m1 + m2))
                if mono:
                    coefs[mono] = coefs.get(mono, 0) + c1 * c2
                else:
                    const += c1 * c2
        return LinExpr._build(coefs, const)

    def shifted(self, delta: int) -> "LinExpr":
        return LinExpr(self.terms, self.const + delta)

    @property
    def is_constant(self) -> bool:
        return not self.terms

    @cached_property
    def variables(self) -> frozenset[int]:
        return frozenset(v for m, _ in self.terms for v in m)

    @cached_property
    def narrowable(self) -> tuple[tuple[int, int], ...]:
        """(variable, coefficient) pairs for variables occurring in exactly one degree-1 term."""
        counts: dict[int, int] = {}
        for m, _ in self.terms:
            for v in m:
                counts[v] = counts.get(v, 0) + 1
        return tuple((m[0], c) for m, c in self.terms if len(m) == 1 and counts[m[0]] == 1)

    def evaluate(self, values: Sequence[int]) -> int:
        total = self.const
        for m, c in self.terms:
            p = c
            for v in m:
                p *= values[v]
            total += p
        return total

    def render(self, names: Sequence[str]) -> str:
        if not self.terms:
            return str(self.const)
        parts = []
        for m, c in self.terms:
            mono = "*".join(names[v] for v in m)
            if c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        if self.const:
            parts.append(str(self.const))
        text = parts[0]
        for p in parts[1:]:
            text += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return text


# =============================================================================
# FORMULAS
# =============================================================================


@dataclass(frozen=True)
class Atom:
    """``expr rel 0``."""

    rel: Rel
    expr: LinExpr


@dataclass(frozen=True)
class And:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    parts: tuple["Formula", ...]


Formula = Union[Atom, And, Or]

TRUE: Formula = And(())
FALSE: Formula = Or(())


def _holds(rel: Rel, value: int) -> bool:
    if rel is Rel.EQ:
        return value == 0
    if rel is Rel.NE:
        return value != 0
    return value <= 0


def atom(rel: Rel, expr: LinExpr) -> Formula:
    """Build an atom, folding ground comparisons to TRUE/FALSE."""
    if expr.is_constant:
        return TRUE if _holds(rel, expr.const) else FALSE
    if rel is not Rel.LE and expr.terms[0][1] < 0:
        expr = -expr
    return Atom(rel, expr)


def compare(op: CompareOp, left: LinExpr, right: LinExpr) -> Formula:
    """Translate ``left op right`` over integers into a normalized atom."""
    if op is CompareOp.EQ:
        return atom(Rel.EQ, left - right)
    if op is CompareOp.NE:
        return atom(Rel.NE, left - right)
    if op is CompareOp.LE:
        return atom(Rel.LE, left - right)
    if op is CompareOp.LT:
        return atom(Rel.LE, (left - right).shifted(1))
    if op is CompareOp.GE:
        return atom(Rel.LE, right - left)
    return atom(Rel.LE, (right - left).shifted(1))


def conj(*parts: Formula) -> Formula:
    flat: list[Formula] = []
    for p in parts:
        if isinstance(p, And):
            flat.extend(p.parts)
        elif p == FALSE:
            return FALSE
        else:
            flat.append(p)
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def disj(*parts: Formula) -> Formula:
    flat: list[Formula] = []
    for p in parts:
        if isinstance(p, Or):
            flat.extend(p.parts)
        elif p == TRUE:
            return TRUE
        else:
            flat.append(p)
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


def negate(f: Formula) -> Formula:
    """Negation normal form of ``not f`` (De Morgan plus relation flipping)."""
    if isinstance(f, Atom):
        if f.rel is Rel.EQ:
            return Atom(Rel.NE, f.expr)
        if f.rel is Rel.NE:
            return Atom(Rel.EQ, f.expr)
        return atom(Rel.LE, (-f.expr).shifted(1))
    if isinstance(f, And):
        return disj(*(negate(p) for p in f.parts))
    return conj(*(negate(p) for p in f.parts))


def evaluate(f: Formula, values: Sequence[int]) -> bool:
    """Truth value of ``f`` under a total assignment indexed by variable."""
    if isinstance(f, Atom):
        return _holds(f.rel, f.expr.evaluate(values))
    if isinstance(f, And):
        return all(evaluate(p, values) for p in f.parts)
    return any(evaluate(p, values) for p in f.parts)


def variables(f: Formula) -> frozenset[int]:
    if isinstance(f, Atom):
        return f.expr.variables
    result: frozenset[int] = frozenset()
    for p in f.parts:
        result |= variables(p)
    return result


def size(f: Formula) -> int:
    """Number of atoms."""
    if isinstance(f, Atom):
        return 1
    return sum(size(p) for p in f.parts)


def to_sexpr(f: Formula, names: Sequence[str], indent: int = 0) -> str:
    """Render as an indented s-expression; negative terms move to the right-hand side."""
    pad = "  " * indent
    if isinstance(f, Atom):
        lhs = LinExpr(tuple((m, c) for m, c in f.expr.terms if c > 0), max(f.expr.const, 0))
        rhs = LinExpr(tuple((m, -c) for m, c in f.expr.terms if c < 0), max(-f.expr.const, 0))
        return f"{pad}({f.rel.value} {lhs.render(names)} {rhs.render(names)})"
    if f == TRUE:
        return f"{pad}true"
    if f == FALSE:
        return f"{pad}false"
    head = "and" if isinstance(f, And) else "or"
    inner = "\n".join(to_sexpr(p, names, indent + 1) for p in f.parts)
    return f"{pad}({head}\n{inner})"
