"""Non-refinement constraints and the search for a mutated action.

A mutant action ``A`` breaks refinement from pre-state ``v`` when it can
take a step (event, ``v'``) that no original action can take:

    translate(A) /\\ not translate(O_1) /\\ ... /\\ not translate(O_m)

Original actions with a different label can never produce the same event,
so only same-label originals are negated. Reachability of ``v`` is ignored
here; see ``reachability``.
"""

import logging
from collections.abc import Iterator
from dataclasses import dataclass, field
from typing import Optional

from .exceptions import ModelMismatch, ResourceLimit
from .formula import Formula, conj, negate
from .model import Action, DoodEntry, Model
from .semantics import (
    StepVarSpace,
    binding_constraint,
    translate_action,
    translate_entry,
    translate_system,
)
from .solver import FDSolver, Problem

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NonRefinementConstraint:
    """Steps of one mutant action that the original system cannot take."""

    space: StepVarSpace
    formula: Formula
    label: str
    action_index: int = -1

    def problem(self) -> Problem:
        return self.space.problem(self.formula)


def check_same_layout(orig: Model, mut: Model) -> None:
    """
    Raises:
        ModelMismatch: If the two models do not share state variables and types
    """
    if orig.state_def != mut.state_def:
        raise ModelMismatch(
            f"state_def differs: [{', '.join(orig.state_def)}] vs [{', '.join(mut.state_def)}]"
        )
    for name, a, b in zip(orig.state_def, orig.state_types(), mut.state_types()):
        if (a.lo, a.hi) != (b.lo, b.hi):
            raise ModelMismatch(
                f"variable '{name}' ranges over {a.lo}..{a.hi} in the original "
                f"but {b.lo}..{b.hi} in the mutant"
            )


def build_nonrefinement_constraint(
    orig: Model,
    mut_action: Action,
    space: StepVarSpace,
    mut: Optional[Model] = None,
    action_index: int = -1,
) -> NonRefinementConstraint:
    """Conjoin the mutant action with the negation of every same-label original entry.

    The mutant action's argument slots are bounded by its do-od binding,
    taken from ``mut`` when given and from ``orig`` otherwise.

    Raises:
        NormalFormViolation: If either side is not in normal form
    """
    owner = mut or orig
    entry: Optional[DoodEntry] = next((e for e in owner.dood if e.label == mut_action.label), None)
    parts = [translate_action(mut_action, space)]
    if entry is not None:
        parts.append(binding_constraint(owner, entry, space))
    for _, a, orig_entry in orig.participating():
        if a.label == mut_action.label:
            parts.append(negate(translate_entry(orig, a, orig_entry, space)))
    return NonRefinementConstraint(space, conj(*parts), mut_action.label, action_index)


def system_nonrefinement(orig: Model, mut: Model, space: StepVarSpace) -> Formula:
    """Whole-system form: ``translate(mut) /\\ not translate(orig)``."""
    return conj(translate_system(mut, space), negate(translate_system(orig, space)))


# =============================================================================
# MUTATED ACTION SEARCH
# =============================================================================


@dataclass
class MutatedActionSearch:
    """Resumable scan over mutant actions for a satisfiable non-refinement constraint.

    Iterating yields ``(action_index, constraint)`` for every participating
    mutant action whose constraint has a solution over the full domains, in
    action order. Actions whose check exhausts the solver's limits are
    skipped and recorded in ``inconclusive``. An action identical to the
    original's same-label action, under the same binding, cannot step
    outside it and is not handed to the solver.
    """

    orig: Model
    mut: Model
    solver: FDSolver
    space: Optional[StepVarSpace] = None
    inconclusive: list[int] = field(default_factory=list)
    checked: int = 0
    unchanged: int = 0

    def __post_init__(self) -> None:
        check_same_layout(self.orig, self.mut)
        if self.space is None:
            self.space = StepVarSpace.build(self.orig, self.mut)

    def _is_unchanged(self, action: Action, entry: DoodEntry) -> bool:
        matches = [(a, e) for _, a, e in self.orig.participating() if a.label == action.label]
        if len(matches) != 1:
            return False
        orig_action, orig_entry = matches[0]
        if orig_action != action or orig_entry != entry:
            return False
        for p in action.params:
            a, b = self.orig.param_type(orig_action, p.name), self.mut.param_type(action, p.name)
            if (a.lo, a.hi) != (b.lo, b.hi):
                return False
        return True

    def __iter__(self) -> Iterator[tuple[int, NonRefinementConstraint]]:
        assert self.space is not None
        for index, action, entry in self.mut.participating():
            if self._is_unchanged(action, entry):
                self.unchanged += 1
                continue
            constraint = build_nonrefinement_constraint(
                self.orig, action, self.space, self.mut, index
            )
            self.checked += 1
            try:
                solution = self.solver.solve(constraint.problem())
            except ResourceLimit as e:
                logger.warning(f"Action '{action.label}' is inconclusive: {e}")
                self.inconclusive.append(index)
                continue
            if solution is not None:
                logger.debug(f"Mutated action candidate: '{action.label}' (#{index})")
                yield index, constraint


def find_mutated_action(
    orig: Model, mut: Model, solver: Optional[FDSolver] = None
) -> Optional[tuple[int, NonRefinementConstraint]]:
    """
    First mutant action that can step where the original cannot, or None.

    None means the mutant refines the original from every state.

    Raises:
        ModelMismatch: If the models do not share their state layout
        ResourceLimit: If no candidate was found but some action was inconclusive
    """
    search = MutatedActionSearch(orig, mut, solver or FDSolver())
    for candidate in search:
        return candidate
    if search.inconclusive:
        labels = ", ".join(mut.actions[i].label for i in search.inconclusive)
        raise ResourceLimit(
            f"inconclusive actions: {labels}",
            {"inconclusive_actions": list(search.inconclusive)},
        )
    return None
