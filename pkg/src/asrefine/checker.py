"""Checking one mutant against its original.

The symbolic engine runs in two phases: locate a mutant action that can
misbehave somewhere (``refinement``), then search for a reachable state
where it does (``reachability``). When the search comes back conforming,
the next candidate action is tried, which covers mutants that change more
than one action. The explicit engine checks the same relation by brute
force and can run alongside for comparison.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Optional

from .config import RunConfig
from .exceptions import ResourceLimit
from .model import Model
from .oracle import ExplicitStats, explicit_check
from .reachability import (
    Conforming,
    Inconclusive,
    NonConforming,
    StepOracle,
    Verdict,
    reach_non_refine,
)
from .refinement import MutatedActionSearch, NonRefinementConstraint
from .solver import FDSolver, SolverLimits, SolverStats
from .types import VerdictName

logger = logging.getLogger(__name__)


@dataclass
class CheckOutcome:
    """Everything learned about one mutant."""

    verdict: VerdictName
    result: Optional[Verdict] = None
    action: Optional[str] = None
    reason: Optional[str] = None
    find_time: float = 0.0
    reach_time: float = 0.0
    total_time: float = 0.0
    solver: SolverStats = field(default_factory=SolverStats)
    candidates: list[int] = field(default_factory=list)
    inconclusive_actions: list[int] = field(default_factory=list)
    constraint: Optional[NonRefinementConstraint] = None
    explicit: Optional[Verdict] = None
    explicit_stats: Optional[ExplicitStats] = None
    agreement: Optional[bool] = None

    @property
    def conforming(self) -> bool:
        return self.verdict in ("equiv_proved", "equiv_bounded")


def explicit_verdict_name(result: Verdict) -> VerdictName:
    if isinstance(result, NonConforming):
        return "nonconforming"
    if isinstance(result, Conforming):
        return "equiv_bounded"
    return "inconclusive"


def engines_agree(symbolic: CheckOutcome, explicit: Verdict) -> Optional[bool]:
    """Compare verdict class, unsafe state and trace length; None if either side is inconclusive."""
    if symbolic.verdict == "inconclusive" or isinstance(explicit, Inconclusive):
        return None
    if isinstance(explicit, Conforming):
        return symbolic.conforming
    result = symbolic.result
    if not isinstance(result, NonConforming):
        return False
    return result.unsafe == explicit.unsafe and len(result.trace) == len(explicit.trace)


# =============================================================================
# SYMBOLIC ENGINE
# =============================================================================


def check_symbolic(orig: Model, mut: Model, config: RunConfig) -> CheckOutcome:
    """
    Run both symbolic phases, resuming with the next candidate action while
    the reachability phase finds every unsafe state out of reach.

    Raises:
        ModelMismatch: If the models do not share their state layout
        NormalFormViolation: If either model is not in normal form
    """
    started = time.monotonic()
    limits = SolverLimits(
        node_budget=config.node_budget,
        timeout=config.solve_timeout,
        deadline=started + config.mutant_timeout,
    )
    solver = FDSolver(limits)
    outcome = CheckOutcome(verdict="equiv_proved", solver=solver.stats)
    search = MutatedActionSearch(orig, mut, solver)
    candidates = iter(search)
    oracle: Optional[StepOracle] = None
    reach_inconclusive: Optional[Inconclusive] = None

    while True:
        phase = time.monotonic()
        candidate = next(candidates, None)
        outcome.find_time += time.monotonic() - phase
        if candidate is None:
            break
        index, constraint = candidate
        outcome.candidates.append(index)
        outcome.action = mut.actions[index].label
        outcome.constraint = constraint

        phase = time.monotonic()
        if oracle is None:
            oracle = StepOracle(orig, search.space, solver)
        result = reach_non_refine(orig, constraint, config.max_depth, oracle=oracle)
        outcome.reach_time += time.monotonic() - phase

        if isinstance(result, NonConforming):
            outcome.verdict = "nonconforming"
            outcome.result = result
            break
        if isinstance(result, Inconclusive):
            reach_inconclusive = result
            continue
        outcome.verdict = "equiv_bounded"
        outcome.result = result
        logger.debug(f"Action '{outcome.action}' misbehaves only out of reach; trying the next one")

    outcome.inconclusive_actions = list(search.inconclusive)
    if outcome.verdict != "nonconforming":
        if reach_inconclusive is not None:
            outcome.verdict = "inconclusive"
            outcome.result = reach_inconclusive
            outcome.reason = f"reachability: {reach_inconclusive.reason}"
        elif search.inconclusive:
            labels = ", ".join(mut.actions[i].label for i in search.inconclusive)
            outcome.verdict = "inconclusive"
            outcome.result = Inconclusive("solver limit", {"actions": labels})
            outcome.reason = f"solver limit on action(s): {labels}"
        elif outcome.verdict == "equiv_proved":
            outcome.action = None
    outcome.total_time = time.monotonic() - started
    logger.debug(
        f"Symbolic check: {outcome.verdict} (find {outcome.find_time:.3f}s, "
        f"reach {outcome.reach_time:.3f}s, {solver.stats.solve_calls} solve calls)"
    )
    return outcome


# =============================================================================
# DRIVER
# =============================================================================


def check_mutant(orig: Model, mut: Model, config: Optional[RunConfig] = None) -> CheckOutcome:
    """
    Check ``mut`` against ``orig`` with the engine(s) selected in ``config``.

    With ``engine="both"`` the symbolic verdict is reported and the
    explicit result is attached together with an agreement flag.

    Raises:
        ModelMismatch: If the models do not share their state layout
        NormalFormViolation: If either model is not in normal form
    """
    config = config or RunConfig()
    if config.engine == "explicit":
        outcome = CheckOutcome(verdict="inconclusive")
    else:
        try:
            outcome = check_symbolic(orig, mut, config)
        except ResourceLimit as e:
            outcome = CheckOutcome(verdict="inconclusive", reason=str(e))

    if config.engine in ("explicit", "both"):
        stats = ExplicitStats()
        explicit = explicit_check(
            orig,
            mut,
            config.max_depth,
            budget=config.explicit_budget,
            timeout=config.mutant_timeout,
            stats=stats,
        )
        outcome.explicit = explicit
        outcome.explicit_stats = stats
        if config.engine == "explicit":
            outcome.verdict = explicit_verdict_name(explicit)
            outcome.result = explicit
            outcome.reach_time = stats.elapsed
            outcome.total_time = stats.elapsed
            if isinstance(explicit, Inconclusive):
                outcome.reason = f"explicit: {explicit.reason}"
        else:
            outcome.agreement = engines_agree(outcome, explicit)
            if outcome.agreement is False:
                logger.warning(
                    f"Engines disagree: symbolic {outcome.verdict}, "
                    f"explicit {explicit_verdict_name(explicit)}"
                )
    return outcome
