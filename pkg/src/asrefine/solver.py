"""Finite-domain constraint solver over bounded integer variables.

Problems are NNF formulas (see ``formula``) over registered variables with
interval domains. The solver propagates bounds through linear atoms, lets
each disjunction contribute the union of what its live branches allow, and
labels variables depth-first in registration order, smallest value first.
Because labelling follows registration order, ``solve`` always returns the
lexicographically smallest solution.

Example:
    x = FDVar(0, "X", 0, 7)
    problem = Problem([x], compare(CompareOp.EQ, LinExpr.var(0), LinExpr.constant(3)))
    FDSolver().solve(problem)  # {"X": 3}
"""

import logging
import time
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass
from typing import Any, Optional

from .exceptions import ResourceLimit
from .formula import Atom, Formula, LinExpr, Or, Rel, atom, conj, disj, variables

logger = logging.getLogger(__name__)

# Solver defaults
DEFAULT_NODE_BUDGET = 1_000_000
DEFAULT_SOLVE_TIMEOUT = 10.0

# Clock is consulted every this many nodes
_CLOCK_STRIDE = 64

_TRUE, _UNKNOWN, _FALSE = 1, 0, -1


# =============================================================================
# DOMAINS
# =============================================================================


class Domain:
    """Finite set of integers stored as sorted, disjoint, non-adjacent intervals."""

    __slots__ = ("intervals", "lo", "hi")

    def __init__(self, intervals: tuple[tuple[int, int], ...]) -> None:
        self.intervals = intervals
        if intervals:
            self.lo = intervals[0][0]
            self.hi = intervals[-1][1]
        else:
            self.lo, self.hi = 1, 0

    @classmethod
    def range(cls, lo: int, hi: int) -> "Domain":
        return cls(((lo, hi),) if lo <= hi else ())

    @classmethod
    def single(cls, value: int) -> "Domain":
        return cls(((value, value),))

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def is_fixed(self) -> bool:
        return self.lo == self.hi

    def __len__(self) -> int:
        return sum(b - a + 1 for a, b in self.intervals)

    def __contains__(self, value: int) -> bool:
        return any(a <= value <= b for a, b in self.intervals)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Domain) and self.intervals == other.intervals

    def __hash__(self) -> int:
        return hash(self.intervals)

    def __repr__(self) -> str:
        return "Domain(" + ", ".join(f"{a}..{b}" for a, b in self.intervals) + ")"

    def values(self) -> Iterator[int]:
        for a, b in self.intervals:
            yield from range(a, b + 1)

    def clamp(self, lo: int, hi: int) -> "Domain":
        if lo <= self.lo and self.hi <= hi:
            return self
        out = []
        for a, b in self.intervals:
            a, b = max(a, lo), min(b, hi)
            if a <= b:
                out.append((a, b))
        return Domain(tuple(out))

    def remove(self, value: int) -> "Domain":
        if value < self.lo or value > self.hi:
            return self
        out = []
        for a, b in self.intervals:
            if a <= value <= b:
                if a < value:
                    out.append((a, value - 1))
                if value < b:
                    out.append((value + 1, b))
            else:
                out.append((a, b))
        return Domain(tuple(out))

    def intersect(self, other: "Domain") -> "Domain":
        if self is other:
            return self
        out = []
        i = j = 0
        xs, ys = self.intervals, other.intervals
        while i < len(xs) and j < len(ys):
            a, b = max(xs[i][0], ys[j][0]), min(xs[i][1], ys[j][1])
            if a <= b:
                out.append((a, b))
            if xs[i][1] < ys[j][1]:
                i += 1
            else:
                j += 1
        return Domain(tuple(out))

    def union(self, other: "Domain") -> "Domain":
        merged: list[tuple[int, int]] = []
        for a, b in sorted(self.intervals + other.intervals):
            if merged and a <= merged[-1][1] + 1:
                if b > merged[-1][1]:
                    merged[-1] = (merged[-1][0], b)
            else:
                merged.append((a, b))
        return Domain(tuple(merged))


# =============================================================================
# PROBLEMS
# =============================================================================


@dataclass(frozen=True)
class FDVar:
    """A registered solver variable with its original domain ``lo..hi``."""

    index: int
    name: str
    lo: int
    hi: int


class Problem:
    """A formula over registered variables, plus blocking clauses.

    Problems are immutable: ``pin`` and ``block`` return new problems.
    """

    def __init__(
        self,
        variables_: Sequence[FDVar],
        formula: Formula,
        blocked: Sequence[Formula] = (),
        domains: Optional[Sequence[Domain]] = None,
    ) -> None:
        self.variables = tuple(variables_)
        self.formula = formula
        self.blocked = tuple(blocked)
        self._index = {v.name: v.index for v in self.variables}
        if domains is None:
            for i, v in enumerate(self.variables):
                if v.index != i:
                    raise ValueError(f"variable {v.name} registered at {i} but has index {v.index}")
            unknown = [i for i in variables(formula) if i >= len(self.variables)]
            if unknown:
                raise ValueError(f"formula mentions unregistered variables {sorted(unknown)}")
            domains = [Domain.range(v.lo, v.hi) for v in self.variables]
        self.domains = tuple(domains)

    def index_of(self, name: str) -> int:
        return self._index[name]

    def constraint(self) -> Formula:
        return conj(self.formula, *self.blocked)

    def pin(self, values: Mapping[int, int]) -> "Problem":
        """Fix variables (by index) to values; out-of-domain values make it unsat."""
        domains = list(self.domains)
        for i, value in values.items():
            domains[i] = self.domains[i].clamp(value, value)
        return Problem(self.variables, self.formula, self.blocked, domains)

    def block(self, indexes: Sequence[int], values: Sequence[int]) -> "Problem":
        """Forbid the projection ``indexes`` from taking ``values`` again."""
        clause = disj(*(atom(Rel.NE, LinExpr.var(i).shifted(-v)) for i, v in zip(indexes, values)))
        return Problem(self.variables, self.formula, self.blocked + (clause,), self.domains)


@dataclass(frozen=True)
class SolverLimits:
    """Per-solve node budget and timeout, plus an optional absolute deadline.

    ``deadline`` is a ``time.monotonic()`` value shared by every solve made
    for one mutant.
    """

    node_budget: int = DEFAULT_NODE_BUDGET
    timeout: float = DEFAULT_SOLVE_TIMEOUT
    deadline: Optional[float] = None


@dataclass
class SolverStats:
    """Counters accumulated over every call made through one solver."""

    solve_calls: int = 0
    nodes: int = 0
    failures: int = 0
    elapsed: float = 0.0
    limit_hits: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "solve_calls": self.solve_calls,
            "nodes": self.nodes,
            "failures": self.failures,
            "elapsed": round(self.elapsed, 6),
            "limit_hits": self.limit_hits,
        }

    def merge(self, other: "SolverStats") -> None:
        self.solve_calls += other.solve_calls
        self.nodes += other.nodes
        self.failures += other.failures
        self.elapsed += other.elapsed
        self.limit_hits += other.limit_hits


# =============================================================================
# PROPAGATION
# =============================================================================


def _bounds(expr: LinExpr, doms: Sequence[Domain]) -> tuple[int, int]:
    lo = hi = expr.const
    for mono, coef in expr.terms:
        if len(mono) == 1:
            d = doms[mono[0]]
            mlo, mhi = d.lo, d.hi
        else:
            mlo = mhi = 1
            for v in mono:
                d = doms[v]
                products = (mlo * d.lo, mlo * d.hi, mhi * d.lo, mhi * d.hi)
                mlo, mhi = min(products), max(products)
        if coef > 0:
            lo += coef * mlo
            hi += coef * mhi
        else:
            lo += coef * mhi
            hi += coef * mlo
    return lo, hi


def _floor_div(a: int, b: int) -> int:
    return a // b


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _propagate_atom(f: Atom, doms: Sequence[Domain]) -> tuple[int, Optional[dict[int, Domain]]]:
    lo, hi = _bounds(f.expr, doms)
    rel = f.rel
    if rel is Rel.EQ:
        if lo > 0 or hi < 0:
            return _FALSE, None
        if lo == hi == 0:
            return _TRUE, {}
    elif rel is Rel.NE:
        if lo > 0 or hi < 0:
            return _TRUE, {}
        if lo == hi == 0:
            return _FALSE, None
    else:
        if hi <= 0:
            return _TRUE, {}
        if lo > 0:
            return _FALSE, None

    narrowed: dict[int, Domain] = {}
    for x, coef in f.expr.narrowable:
        d = doms[x]
        if coef > 0:
            rest_lo, rest_hi = lo - coef * d.lo, hi - coef * d.hi
        else:
            rest_lo, rest_hi = lo - coef * d.hi, hi - coef * d.lo
        if rel is Rel.EQ:
            # coef * x in [-rest_hi, -rest_lo]
            if coef > 0:
                new = d.clamp(_ceil_div(-rest_hi, coef), _floor_div(-rest_lo, coef))
            else:
                new = d.clamp(_ceil_div(-rest_lo, coef), _floor_div(-rest_hi, coef))
        elif rel is Rel.LE:
            # coef * x <= -rest_lo
            if coef > 0:
                new = d.clamp(d.lo, _floor_div(-rest_lo, coef))
            else:
                new = d.clamp(_ceil_div(-rest_lo, coef), d.hi)
        else:
            if rest_lo != rest_hi or (-rest_lo) % coef != 0:
                continue
            new = d.remove((-rest_lo) // coef)
        if new.is_empty:
            return _FALSE, None
        if new is not d and new != d:
            narrowed[x] = new
    return _UNKNOWN, narrowed


def _propagate(f: Formula, doms: Sequence[Domain]) -> tuple[int, Optional[dict[int, Domain]]]:
    """Status of ``f`` over the box ``doms`` and the domains it implies.

    Returned domains are subsets of the current ones and keep every value
    that takes part in a solution of ``f`` inside the box.
    """
    if isinstance(f, Atom):
        return _propagate_atom(f, doms)
    if isinstance(f, Or):
        alive: list[dict[int, Domain]] = []
        for part in f.parts:
            status, narrowed = _propagate(part, doms)
            if status == _TRUE:
                return _TRUE, {}
            if status == _UNKNOWN:
                assert narrowed is not None
                alive.append(narrowed)
        if not alive:
            return _FALSE, None
        if len(alive) == 1:
            return _UNKNOWN, alive[0]
        common = set(alive[0])
        for narrowed in alive[1:]:
            common &= narrowed.keys()
        union: dict[int, Domain] = {}
        for x in common:
            d = alive[0][x]
            for narrowed in alive[1:]:
                d = d.union(narrowed[x])
            if d != doms[x]:
                union[x] = d
        return _UNKNOWN, union

    status = _TRUE
    merged: dict[int, Domain] = {}
    for part in f.parts:
        part_status, narrowed = _propagate(part, doms)
        if part_status == _FALSE:
            return _FALSE, None
        if part_status == _UNKNOWN:
            status = _UNKNOWN
        assert narrowed is not None
        for x, d in narrowed.items():
            if x in merged:
                d = merged[x].intersect(d)
                if d.is_empty:
                    return _FALSE, None
            merged[x] = d
    return status, merged


def _fixpoint(f: Formula, doms: list[Domain]) -> int:
    """Narrow ``doms`` in place until stable; returns the final status."""
    while True:
        status, narrowed = _propagate(f, doms)
        if status != _UNKNOWN:
            return status
        assert narrowed is not None
        changed = False
        for x, d in narrowed.items():
            current = doms[x]
            new = current.intersect(d)
            if new.is_empty:
                return _FALSE
            if new != current:
                doms[x] = new
                changed = True
        if not changed:
            return _UNKNOWN


# =============================================================================
# SEARCH
# =============================================================================


@dataclass
class _Search:
    formula: Formula
    node_budget: int
    stop_at: float
    stop_reason: str
    nodes: int = 0
    failures: int = 0

    def tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise ResourceLimit("nodes", {"nodes": self.nodes, "failures": self.failures})
        if self.nodes % _CLOCK_STRIDE == 0 and time.monotonic() > self.stop_at:
            raise ResourceLimit(self.stop_reason, {"nodes": self.nodes, "failures": self.failures})

    def run(self, doms: list[Domain]) -> Optional[list[int]]:
        self.tick()
        status = _fixpoint(self.formula, doms)
        if status == _FALSE:
            self.failures += 1
            return None
        branch = next((i for i, d in enumerate(doms) if not d.is_fixed), None)
        if branch is None or status == _TRUE:
            return [d.lo for d in doms]
        for value in doms[branch].values():
            child = list(doms)
            child[branch] = Domain.single(value)
            result = self.run(child)
            if result is not None:
                return result
        return None


class FDSolver:
    """Deterministic depth-first solver with per-solve resource limits.

    One instance accumulates statistics over all its calls; instances share
    nothing, so independent problems can be solved concurrently.
    """

    def __init__(self, limits: Optional[SolverLimits] = None) -> None:
        self.limits = limits or SolverLimits()
        self.stats = SolverStats()

    def _solve_values(self, problem: Problem) -> Optional[list[int]]:
        started = time.monotonic()
        stop_at = started + self.limits.timeout
        reason = "timeout"
        if self.limits.deadline is not None and self.limits.deadline < stop_at:
            stop_at, reason = self.limits.deadline, "deadline"
        search = _Search(problem.constraint(), self.limits.node_budget, stop_at, reason)
        self.stats.solve_calls += 1
        try:
            if any(d.is_empty for d in problem.domains):
                return None
            return search.run(list(problem.domains))
        except ResourceLimit as e:
            self.stats.limit_hits += 1
            logger.warning(f"Solver gave up after {search.nodes} nodes ({e.reason})")
            raise
        finally:
            self.stats.nodes += search.nodes
            self.stats.failures += search.failures
            self.stats.elapsed += time.monotonic() - started

    def solve(self, problem: Problem) -> Optional[dict[str, int]]:
        """Smallest solution in registration order, or None when unsatisfiable.

        Raises:
            ResourceLimit: If the node budget, timeout or deadline is exhausted
        """
        values = self._solve_values(problem)
        if values is None:
            return None
        return {v.name: values[v.index] for v in problem.variables}

    def enumerate_values(
        self,
        problem: Problem,
        projection: Sequence[int],
        limit: Optional[int] = None,
    ) -> list[tuple[int, ...]]:
        """Distinct projected solutions in ascending order, by repeated solve + block."""
        found: list[tuple[int, ...]] = []
        current = problem
        while limit is None or len(found) < limit:
            values = self._solve_values(current)
            if values is None:
                break
            projected = tuple(values[i] for i in projection)
            found.append(projected)
            current = current.block(projection, projected)
        found.sort()
        return found

    def enumerate(
        self,
        problem: Problem,
        projection: Sequence[str],
        limit: Optional[int] = None,
    ) -> list[dict[str, int]]:
        """All distinct solutions restricted to ``projection`` (complete when fewer than ``limit``).

        Raises:
            ResourceLimit: If any underlying solve exhausts its limits
        """
        indexes = [problem.index_of(name) for name in projection]
        return [
            dict(zip(projection, values))
            for values in self.enumerate_values(problem, indexes, limit)
        ]


def solve(problem: Problem, limits: Optional[SolverLimits] = None) -> Optional[dict[str, int]]:
    return FDSolver(limits).solve(problem)


def enumerate_solutions(
    problem: Problem,
    projection: Sequence[str],
    limit: Optional[int] = None,
    limits: Optional[SolverLimits] = None,
) -> list[dict[str, int]]:
    return FDSolver(limits).enumerate(problem, projection, limit)
