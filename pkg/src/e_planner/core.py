"""Ground vocabulary of Language E: literals, propositions and planning problems over integer time."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import StrEnum
from functools import cached_property
from typing import TYPE_CHECKING, ClassVar

if TYPE_CHECKING:
    from collections.abc import Iterable


@dataclass(frozen=True, order=True, slots=True)
class FluentLiteral:
    fluent: str
    positive: bool = True

    def __str__(self) -> str:
        return self.fluent if self.positive else f"-{self.fluent}"


def complement(lit: FluentLiteral) -> FluentLiteral:
    return FluentLiteral(lit.fluent, not lit.positive)


type Condition = tuple[FluentLiteral, ...]


def canonical_condition(lits: Iterable[FluentLiteral]) -> Condition:
    """Sort by fluent name (negative before positive on a clash) and drop duplicates."""
    return tuple(sorted(set(lits), key=lambda lit: (lit.fluent, lit.positive)))


def fmt_condition(cond: Condition) -> str:
    return "{" + ", ".join(map(str, cond)) + "}"


@dataclass(frozen=True, order=True, slots=True)
class HoldsAt:
    """t-proposition: `L holds-at T`."""

    kind: ClassVar[str] = "t"
    literal: FluentLiteral
    time: int

    def __str__(self) -> str:
        return f"{self.literal} holds-at {self.time}"


@dataclass(frozen=True, order=True, slots=True)
class HappensAt:
    """h-proposition: `A happens-at T`."""

    kind: ClassVar[str] = "h"
    action: str
    time: int

    def __str__(self) -> str:
        return f"{self.action} happens-at {self.time}"


class Effect(StrEnum):
    INITIATES = "initiates"
    TERMINATES = "terminates"


@dataclass(frozen=True, order=True, slots=True)
class CausalLaw:
    """c-proposition: `A initiates|terminates F when C`."""

    kind: ClassVar[str] = "c"
    action: str
    effect: Effect
    fluent: str
    condition: Condition = ()

    @property
    def literal(self) -> FluentLiteral:
        return FluentLiteral(self.fluent, positive=self.effect is Effect.INITIATES)

    def __str__(self) -> str:
        when = f" when {fmt_condition(self.condition)}" if self.condition else ""
        return f"{self.action} {self.effect} {self.fluent}{when}"


@dataclass(frozen=True, order=True, slots=True)
class Constraint:
    """r-proposition: `L whenever C`."""

    kind: ClassVar[str] = "r"
    literal: FluentLiteral
    condition: Condition

    def __str__(self) -> str:
        return f"{self.literal} whenever {fmt_condition(self.condition)}"


@dataclass(frozen=True, order=True, slots=True)
class Precondition:
    """p-proposition: `A needs C`."""

    kind: ClassVar[str] = "p"
    action: str
    condition: Condition

    def __str__(self) -> str:
        return f"{self.action} needs {fmt_condition(self.condition)}"


type DomainProposition = HoldsAt | HappensAt | CausalLaw | Constraint
type Proposition = DomainProposition | Precondition

_KIND_ORDER = {"c": 0, "h": 1, "t": 2, "r": 3, "p": 4}


def proposition_key(p: Proposition) -> tuple[int, str]:
    """Canonical ordering of propositions (rendering order, diagnostic indices)."""
    return (_KIND_ORDER[p.kind], str(p))


def condition_at(cond: Iterable[FluentLiteral], t: int) -> frozenset[HoldsAt]:
    return frozenset(HoldsAt(lit, t) for lit in cond)


@dataclass(frozen=True)
class PlanningProblem:
    """A Language E planning problem: domain description D, preconditions P and goal G."""

    fluents: frozenset[str]
    actions: frozenset[str]
    horizon: int
    domain: frozenset[DomainProposition] = frozenset()
    preconditions: frozenset[Precondition] = frozenset()
    goal: frozenset[HoldsAt] = frozenset()
    name: str = field(default="", compare=False)

    @cached_property
    def fluent_order(self) -> tuple[str, ...]:
        return tuple(sorted(self.fluents))

    @cached_property
    def observations(self) -> tuple[HoldsAt, ...]:
        return tuple(sorted(p for p in self.domain if isinstance(p, HoldsAt)))

    @cached_property
    def occurrences(self) -> tuple[HappensAt, ...]:
        return tuple(sorted(p for p in self.domain if isinstance(p, HappensAt)))

    @cached_property
    def laws(self) -> tuple[CausalLaw, ...]:
        return tuple(sorted(p for p in self.domain if isinstance(p, CausalLaw)))

    @cached_property
    def constraints(self) -> tuple[Constraint, ...]:
        return tuple(sorted(p for p in self.domain if isinstance(p, Constraint)))

    @cached_property
    def propositions(self) -> tuple[Proposition, ...]:
        """Domain propositions then p-propositions, in canonical order (goal excluded)."""
        return tuple(sorted((*self.domain, *self.preconditions), key=proposition_key))

    @cached_property
    def effect_fluents(self) -> frozenset[str]:
        """Fluents appearing in the effect position of some c-proposition."""
        return frozenset(law.fluent for law in self.laws)

    def laws_for(self, action: str) -> tuple[CausalLaw, ...]:
        return tuple(law for law in self.laws if law.action == action)

    def needs(self, action: str) -> tuple[Precondition, ...]:
        return tuple(sorted(p for p in self.preconditions if p.action == action))

    def obligations(self, occurrences: Iterable[HappensAt] | None = None) -> frozenset[HoldsAt]:
        """Precondition instances `C(T)` for the given (default: all) occurrences."""
        occs = self.occurrences if occurrences is None else occurrences
        return frozenset(
            h for occ in occs for p in self.needs(occ.action) for h in condition_at(p.condition, occ.time)
        )

    def with_occurrences(self, extra: Iterable[HappensAt]) -> PlanningProblem:
        return replace(self, domain=self.domain | frozenset(extra))

    def with_observations(self, extra: Iterable[HoldsAt]) -> PlanningProblem:
        return replace(self, domain=self.domain | frozenset(extra))

    def with_goal(self, goal: Iterable[HoldsAt]) -> PlanningProblem:
        return replace(self, goal=frozenset(goal))

    def with_horizon(self, horizon: int) -> PlanningProblem:
        return replace(self, horizon=horizon)

    def without_occurrences(self) -> PlanningProblem:
        return replace(self, domain=frozenset(p for p in self.domain if not isinstance(p, HappensAt)))


@dataclass(frozen=True, slots=True)
class Diagnostic:
    """A well-formedness problem; `index` points into `PlanningProblem.propositions` (-1: goal/problem)."""

    index: int
    code: str
    message: str
    proposition: Proposition | None = None

    def __str__(self) -> str:
        where = f" in `{self.proposition}`" if self.proposition is not None else ""
        return f"{self.code}: {self.message}{where}"


def _literals_of(p: Proposition) -> tuple[FluentLiteral, ...]:
    match p:
        case HoldsAt(literal=lit):
            return (lit,)
        case CausalLaw(fluent=f, condition=cond):
            return (FluentLiteral(f), *cond)
        case Constraint(literal=lit, condition=cond):
            return (lit, *cond)
        case Precondition(condition=cond):
            return cond
        case _:
            return ()


def _check_proposition(problem: PlanningProblem, index: int, p: Proposition) -> list[Diagnostic]:
    out: list[Diagnostic] = []

    def report(code: str, message: str) -> None:
        out.append(Diagnostic(index, code, message, p))

    out.extend(
        Diagnostic(index, "undeclared-fluent", f"fluent `{lit.fluent}` is not declared", p)
        for lit in _literals_of(p)
        if lit.fluent not in problem.fluents
    )

    if isinstance(p, HappensAt | CausalLaw | Precondition) and p.action not in problem.actions:
        report("undeclared-action", f"action `{p.action}` is not declared")

    if isinstance(p, HoldsAt | HappensAt) and not 0 <= p.time <= problem.horizon:
        report("time-out-of-range", f"time {p.time} is outside [0, {problem.horizon}]")

    if isinstance(p, CausalLaw | Constraint | Precondition):
        cond_fluents = [lit.fluent for lit in p.condition]
        if len(cond_fluents) != len(set(cond_fluents)):
            report("conflicting-condition", "condition set holds a fluent and its negation")

    if isinstance(p, Precondition) and not p.condition:
        report("empty-precondition-set", "p-propositions need a non-empty condition set")

    return out


def validate(problem: PlanningProblem) -> list[Diagnostic]:
    """Check the well-formedness invariants of a problem.

    Returns:
        list[Diagnostic]: Empty iff the problem is well formed
    """
    out: list[Diagnostic] = []
    if problem.horizon < 0:
        out.append(Diagnostic(-1, "negative-horizon", f"horizon {problem.horizon} is negative"))

    for index, p in enumerate(problem.propositions):
        out.extend(_check_proposition(problem, index, p))

    for g in sorted(problem.goal):
        out.extend(Diagnostic(-1, d.code, d.message, g) for d in _check_proposition(problem, -1, g))

    return out


def validate_query(problem: PlanningProblem, query: Iterable[HoldsAt]) -> list[Diagnostic]:
    """Check that each queried literal names a declared fluent at a time within the horizon."""
    return [d for q in sorted(query) for d in _check_proposition(problem, -1, q)]
