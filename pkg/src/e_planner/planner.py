"""The E-Planner: weak plans by abduction and admissibility, safe plans by refuting every counter-model."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import StrEnum
from typing import TYPE_CHECKING

from e_planner.argumentation import (
    ArgumentRule,
    assumption,
    extend_to_maximal,
    fmt_rules,
    negate,
    translate,
)
from e_planner.common.config import EngineConfig
from e_planner.common.error import EngineMismatchError, NoPlanError, ValidationError
from e_planner.common.log import get_log
from e_planner.core import HoldsAt
from e_planner.derivation import (
    AbductionState,
    Budget,
    Candidate,
    Derivation,
    Trace,
    abduce_support,
    extended_failed_derivation,
    extended_successful_derivation,
    failed_derivation,
    fmt_facts,
)
from e_planner.models import PlanResultClass, PlanVerdict, classify_plan

if TYPE_CHECKING:
    from collections.abc import Iterable

    from e_planner.argumentation import ArgumentationProgram
    from e_planner.core import HappensAt, PlanningProblem

log = get_log("planner")


class PlanKind(StrEnum):
    SAFE = "SAFE"
    WEAK = "WEAK"


@dataclass(frozen=True, slots=True)
class PlanOutcome:
    """A plan found by the planner, the admissible set backing it and (for weak plans) its assumptions."""

    plan: frozenset[HappensAt]
    kind: PlanKind
    assumptions: frozenset[HoldsAt] = frozenset()
    witness: frozenset[ArgumentRule] = frozenset()
    trace: Trace | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.kind is PlanKind.SAFE and self.assumptions:
            msg = "safe plans carry no assumptions"
            raise ValueError(msg)


@dataclass(frozen=True, slots=True)
class VerifiedPlan:
    outcome: PlanOutcome
    verdict: PlanResultClass


def _time_order(h: HoldsAt) -> tuple[int, str, bool]:
    return (h.time, h.literal.fluent, h.literal.positive)


def format_plan(outcome: PlanOutcome) -> str:
    """`SAFE`/`WEAK`, one `A @ T` line per action, then `ASSUMES L @ T` lines."""
    lines = [str(outcome.kind)]
    lines.extend(f"{h.action} @ {h.time}" for h in sorted(outcome.plan, key=lambda h: (h.time, h.action)))
    lines.extend(f"ASSUMES {a.literal} @ {a.time}" for a in sorted(outcome.assumptions, key=_time_order))
    return "\n".join(lines) + "\n"


class Planner:
    """Planner for one problem; sequential, owns its search budget and transcript."""

    def __init__(
        self,
        problem: PlanningProblem,
        config: EngineConfig | None = None,
        *,
        trace: Trace | None = None,
    ) -> None:
        if not problem.goal:
            msg = "the problem has no goal\n\n[tip]tip:[/] add a [var]goal[/] statement or pass [var]--goal[/]"
            raise ValidationError(msg)
        self.problem = problem
        self.config = config or EngineConfig()
        self.trace = trace
        self.program: ArgumentationProgram = translate(problem)
        self.budget = Budget(self.config.node_budget)

    # Candidates and witnesses

    def candidates(self) -> Iterable[Candidate]:
        return abduce_support(self.program, self.problem.goal, max_fluents=self.config.max_fluents)

    def _derive(self, candidate: Candidate) -> Derivation | None:
        state = AbductionState.start(self.problem, candidate.abduced)
        derivation = extended_successful_derivation(
            self.program,
            state,
            candidate.arguments,
            max_abductions=self.config.abduction_depth,
            budget=self.budget,
            trace=self.trace,
        )
        if derivation is None:
            return None

        # the witness must close into a model of D' and the goal
        requirements = self.program.requirements.extended(derivation.state.obligations | self.problem.goal)
        closed = extend_to_maximal(
            self.program,
            derivation.state.abduced,
            derivation.arguments,
            requirements=requirements,
            max_fluents=self.config.max_fluents,
        )
        if closed is None:
            log.debug("witness %s does not extend to a model", fmt_rules(derivation.arguments))
            return None
        return derivation

    # Assumptions

    def entailed(self, lit: HoldsAt, plan: Iterable[HappensAt], given: Iterable[HoldsAt] = ()) -> bool:
        """Sceptical consequence of D plus `plan` (and `given` as extra t-propositions): the complement fails."""
        requirements = self.program.requirements.extended(given)
        refutation = failed_derivation(
            self.program,
            plan,
            (assumption(negate(lit)),),
            requirements=requirements,
            budget=self.budget,
        )
        return refutation.confirmed

    def _assumptions(self, witness: frozenset[ArgumentRule], plan: frozenset[HappensAt]) -> frozenset[HoldsAt]:
        """Unsettled assumptions of the witness, greedily reduced.

        Assumptions that are not conditions of the witness's generation rules
        are dropped first, later ticks before earlier ones.
        """
        conditions = {
            HoldsAt(lit, r.since)
            for r in witness
            if r.is_generation and r.since is not None
            for law in self.program.view(plan).firing_laws(r.since)
            if law.literal == r.conclusion.literal
            for lit in law.condition
        }
        unsettled = [r.conclusion for r in witness if r.is_assumption and not self.entailed(r.conclusion, plan)]

        kept = set(unsettled)
        for a in sorted(unsettled, key=lambda h: (h in conditions, -h.time, h.literal)):
            trial = kept - {a}
            if self.entailed(a, plan, trial):
                kept = trial
        return frozenset(kept)

    def check_assumptions(self, outcome: PlanOutcome) -> bool:
        """Every assumption of the witness is a sceptical consequence of D' plus the plan."""
        return all(self.entailed(r.conclusion, outcome.plan) for r in outcome.witness if r.is_assumption)

    def weak_plan(self) -> PlanOutcome:
        """First weak plan along the support stream.

        Raises:
            NoPlanError: When the stream is exhausted
            CapExceededError: When a search limit is hit
        """
        for candidate in self.candidates():
            outcome = self._weak_from(candidate)
            if outcome is not None:
                return outcome
        raise NoPlanError(self._no_plan_message("weak"))

    def _weak_from(self, candidate: Candidate) -> PlanOutcome | None:
        derivation = self._derive(candidate)
        if derivation is None:
            return None
        plan = derivation.state.abduced
        assumptions = self._assumptions(derivation.arguments, plan)
        log.info("weak plan %s assuming %d literal(s)", fmt_facts(plan), len(assumptions))
        if not assumptions and self._settled(AbductionState.start(self.problem, plan)):
            return PlanOutcome(plan, PlanKind.SAFE, witness=derivation.arguments, trace=self.trace)
        return PlanOutcome(plan, PlanKind.WEAK, assumptions, derivation.arguments, self.trace)

    # Completion to safe plans

    def _targets(self, state: AbductionState) -> list[HoldsAt]:
        return sorted(self.problem.goal | state.obligations, key=_time_order)

    def _settled(self, state: AbductionState) -> bool:
        """Every goal literal and obligation is entailed: each supporter of its complement fails."""
        view = self.program.view(state.abduced)
        return all(
            failed_derivation(self.program, state.abduced, r, budget=self.budget).confirmed
            for target in self._targets(state)
            for r in view.base.of(negate(target))
        )

    def _refute_complements(self, state: AbductionState) -> AbductionState | None:
        """Abduce until no admissible set derives the complement of a goal literal or obligation."""
        changed = True
        while changed:
            changed = False
            view = self.program.view(state.abduced)
            for target in self._targets(state):
                for r in view.base.of(negate(target)):
                    found = extended_failed_derivation(
                        self.program,
                        state,
                        r,
                        before=target.time,
                        max_depth=self.config.abduction_depth,
                        budget=self.budget,
                        trace=self.trace,
                    )
                    if found is None:
                        log.debug("cannot refute %s", fmt_rules(r))
                        return None
                    if found.abduced != state.abduced:
                        state = found
                        changed = True
                        break
                if changed:
                    break
        return state

    def _complete(self, weak: PlanOutcome) -> PlanOutcome | None:
        if weak.kind is PlanKind.SAFE:
            return weak
        state = AbductionState.start(self.problem, weak.plan)
        if self.check_assumptions(weak) and self._settled(state):
            return PlanOutcome(weak.plan, PlanKind.SAFE, witness=weak.witness, trace=self.trace)

        witness = weak.witness
        for _ in range(self.config.max_plan_rounds):
            refuted = self._refute_complements(state)
            if refuted is None:
                return None
            reconfirmed = extended_successful_derivation(
                self.program,
                refuted,
                witness,
                max_abductions=self.config.abduction_depth,
                budget=self.budget,
                trace=self.trace,
            )
            if reconfirmed is None:
                return None
            witness = reconfirmed.arguments
            if reconfirmed.state.abduced == refuted.abduced:
                log.info("safe plan %s", fmt_facts(refuted.abduced))
                return PlanOutcome(refuted.abduced, PlanKind.SAFE, witness=witness, trace=self.trace)
            state = reconfirmed.state
        return None

    def safe_plan(self) -> PlanOutcome:
        """Extend weak plans along the support stream until one becomes safe.

        Raises:
            NoPlanError: When every candidate is exhausted
            CapExceededError: When a search limit is hit
        """
        for candidate in self.candidates():
            weak = self._weak_from(candidate)
            if weak is None:
                continue
            safe = self._complete(weak)
            if safe is not None:
                return safe
        raise NoPlanError(self._no_plan_message("safe"))

    def _no_plan_message(self, mode: str) -> str:
        goal = ", ".join(str(g) for g in sorted(self.problem.goal, key=_time_order))
        return f"no {mode} plan for [var]{goal}[/] within horizon {self.problem.horizon}"

    # Verification

    def verify(self, outcome: PlanOutcome) -> VerifiedPlan:
        """Classify the plan with the model oracle; a disagreement is an engine defect.

        Raises:
            EngineMismatchError: If the oracle rejects what the planner claims
        """
        verdict = classify_plan(self.problem, outcome.plan, max_fluents=self.config.max_fluents)
        accepted = {PlanVerdict.SAFE} if outcome.kind is PlanKind.SAFE else {PlanVerdict.SAFE, PlanVerdict.WEAK}
        if verdict.tag not in accepted:
            msg = (
                f"planner reports {outcome.kind} for {fmt_facts(outcome.plan)} "
                f"but the model oracle classifies it {verdict.tag}"
            )
            raise EngineMismatchError(msg)
        return VerifiedPlan(outcome, verdict)

    def minimize(self, outcome: PlanOutcome) -> PlanOutcome:
        """Drop actions (latest first) while the oracle still classifies the plan safe."""
        plan = set(outcome.plan)
        for h in sorted(outcome.plan, key=lambda h: (-h.time, h.action)):
            trial = plan - {h}
            if classify_plan(self.problem, trial, max_fluents=self.config.max_fluents).tag is PlanVerdict.SAFE:
                plan = trial
        return PlanOutcome(frozenset(plan), outcome.kind, outcome.assumptions, outcome.witness, outcome.trace)

    def plan_and_verify(self) -> VerifiedPlan:
        """Safe plan if one exists, otherwise a weak plan; cross-checked with the oracle."""
        try:
            outcome = self.safe_plan()
        except NoPlanError:
            log.info("no safe plan; falling back to a weak plan")
            outcome = self.weak_plan()
        if self.config.minimize_plan and outcome.kind is PlanKind.SAFE:
            outcome = self.minimize(outcome)
        return self.verify(outcome)


def weak_plan(
    problem: PlanningProblem,
    config: EngineConfig | None = None,
    *,
    trace: Trace | None = None,
) -> PlanOutcome:
    return Planner(problem, config, trace=trace).weak_plan()


def safe_plan(
    problem: PlanningProblem,
    config: EngineConfig | None = None,
    *,
    trace: Trace | None = None,
) -> PlanOutcome:
    return Planner(problem, config, trace=trace).safe_plan()


def check_assumptions(problem: PlanningProblem, outcome: PlanOutcome, config: EngineConfig | None = None) -> bool:
    return Planner(problem, config).check_assumptions(outcome)


def plan_and_verify(
    problem: PlanningProblem,
    config: EngineConfig | None = None,
    *,
    trace: Trace | None = None,
) -> VerifiedPlan:
    return Planner(problem, config, trace=trace).plan_and_verify()
