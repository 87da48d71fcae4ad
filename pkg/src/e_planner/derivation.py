"""Proof procedures over argumentation programs.

Successful derivations grow a root set of arguments with counterattacks until it
is admissible; failed derivations establish that no admissible superset
exists. The extended variants may abduce `HappensAt` facts along the way,
either to let counterattacks exist or to generate attacks that block every
admissible superset.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import StrEnum
from typing import TYPE_CHECKING

from e_planner.argumentation import (
    ArgumentRule,
    ProgramView,
    assumption,
    fmt_rules,
    generation,
    negate,
    rules_key,
    sceptical,
    set_lower,
)
from e_planner.common.error import CapExceededError
from e_planner.common.log import get_log
from e_planner.core import HappensAt, HoldsAt

if TYPE_CHECKING:
    from collections.abc import Callable, Iterable, Iterator
    from pathlib import Path

    from e_planner.argumentation import ArgumentationProgram, Requirements
    from e_planner.core import PlanningProblem

log = get_log("derivation")

DEFAULT_NODE_BUDGET = 200_000
DEFAULT_ABDUCTION_DEPTH = 3

type Rules = frozenset[ArgumentRule]


class TraceEvent(StrEnum):
    NODE = "NODE"
    ATTACK = "ATTACK"
    COUNTER = "COUNTER"
    SUSPEND = "SUSPEND"
    ABDUCE = "ABDUCE"


class Trace:
    """Line-oriented transcript of derivation events."""

    __slots__ = ("lines",)

    def __init__(self) -> None:
        self.lines: list[str] = []

    def emit(self, event: TraceEvent, text: str) -> None:
        self.lines.append(f"{event} {text}")

    def write(self, path: Path) -> None:
        path.write_text("\n".join(self.lines) + ("\n" if self.lines else ""), encoding="utf-8")


def _emit(trace: Trace | None, event: TraceEvent, text: str) -> None:
    if trace is not None:
        trace.emit(event, text)


def fmt_facts(facts: Iterable[HappensAt]) -> str:
    return "{" + ", ".join(f"{f.action}@{f.time}" for f in sorted(facts, key=lambda f: (f.time, f.action))) + "}"


class Budget:
    """Search nodes shared by every derivation of one planner run."""

    __slots__ = ("limit", "used")

    def __init__(self, limit: int = DEFAULT_NODE_BUDGET) -> None:
        self.limit = limit
        self.used = 0

    def spend(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise CapExceededError("node_budget", self.limit)


class NodeStatus(StrEnum):
    LIVE = "live"
    SUSPENDED = "suspended"
    DEFEATED = "defeated"


@dataclass(slots=True)
class DerivationNode:
    """A node of a derivation tree; children attack the node's arguments."""

    arguments: Rules
    status: NodeStatus = NodeStatus.LIVE
    required: frozenset[HappensAt] = frozenset()
    children: list[DerivationNode] = field(default_factory=list)

    def render(self, depth: int = 0) -> list[str]:
        needs = f" needs {fmt_facts(self.required)}" if self.required else ""
        lines = [f"{'  ' * depth}{fmt_rules(self.arguments)} [{self.status}]{needs}"]
        for child in self.children:
            lines.extend(child.render(depth + 1))
        return lines


@dataclass(frozen=True, slots=True)
class AbductionState:
    """Facts abduced so far and the precondition obligations they (and the domain's own events) bring."""

    abduced: frozenset[HappensAt]
    obligations: frozenset[HoldsAt] = frozenset()

    @classmethod
    def start(cls, problem: PlanningProblem, abduced: Iterable[HappensAt] = ()) -> AbductionState:
        facts = frozenset(abduced)
        return cls(facts, problem.obligations((*problem.occurrences, *facts)))

    def extended(self, problem: PlanningProblem, fact: HappensAt) -> AbductionState:
        return AbductionState(self.abduced | {fact}, self.obligations | problem.obligations((fact,)))


@dataclass(frozen=True, slots=True)
class Derivation:
    arguments: Rules
    state: AbductionState
    tree: DerivationNode = field(compare=False)


@dataclass(frozen=True, slots=True)
class FailedDerivation:
    """Outcome of a failed derivation: confirmed, or refuted by an admissible counterexample."""

    counterexample: Rules | None = None

    @property
    def confirmed(self) -> bool:
        return self.counterexample is None


def _literal_order(h: HoldsAt) -> tuple[int, str, bool]:
    return (h.time, h.literal.fluent, h.literal.positive)


def abductive_supports(
    view: ProgramView,
    lit: HoldsAt,
    *,
    before: int | None = None,
    latest_first: bool = True,
) -> list[tuple[Rules, HappensAt]]:
    """Generation-based supports of `lit` that need exactly one fact absent from the view."""
    problem = view.program.problem
    limit = lit.time if before is None else min(lit.time, before)
    out: list[tuple[Rules, HappensAt]] = []
    for since in range(limit):
        for action in sorted(problem.actions):
            fact = HappensAt(action, since)
            if fact in view.facts:
                continue
            for law in problem.laws_for(action):
                if law.literal != lit.literal:
                    continue
                per_condition = [view.base.of(HoldsAt(c, since)) for c in law.condition]
                out.extend(
                    (frozenset().union(*combo) | {generation(lit, since)}, fact)
                    for combo in itertools.product(*per_condition)
                )

    def key(item: tuple[Rules, HappensAt]) -> tuple[int, int, str, object]:
        rules, fact = item
        return (len(rules), -fact.time if latest_first else fact.time, fact.action, rules_key(rules))

    return sorted(set(out), key=key)


class _Search:
    """Depth-first successful derivation; optionally abduces facts to make counterattacks or supports exist."""

    def __init__(
        self,
        program: ArgumentationProgram,
        requirements: Requirements,
        *,
        budget: Budget,
        trace: Trace | None,
        max_abductions: int = 0,
    ) -> None:
        self.program = program
        self.problem = program.problem
        self.requirements = requirements
        self.budget = budget
        self.trace = trace
        self.max_abductions = max_abductions
        self.visited: set[tuple[Rules, frozenset[HappensAt]]] = set()
        self.initial_facts: frozenset[HappensAt] = frozenset()

    def run(self, root: Rules, state: AbductionState) -> tuple[Rules, AbductionState, list[tuple[Rules, Rules]]] | None:
        self.initial_facts = state.abduced
        return self._visit(root, state, [])

    def _can_abduce(self, state: AbductionState) -> bool:
        return len(state.abduced - self.initial_facts) < self.max_abductions

    def _options(
        self,
        view: ProgramView,
        lit: HoldsAt,
        state: AbductionState,
        accept: Callable[[Rules], bool] | None = None,
    ) -> list[tuple[Rules, HappensAt | None]]:
        found: list[tuple[Rules, HappensAt | None]] = [
            (s, None) for s in view.base.of(lit) if accept is None or accept(s)
        ]
        if self._can_abduce(state):
            found.extend(
                (s, fact)
                for s, fact in abductive_supports(view, lit, before=self.problem.horizon)
                if accept is None or accept(s)
            )
        return found

    def _counters(
        self,
        view: ProgramView,
        attacker: Rules,
        state: AbductionState,
    ) -> list[tuple[Rules, HappensAt | None]]:
        within = view.within(attacker)
        plain: dict[Rules, None] = {}
        abduced: dict[tuple[Rules, HappensAt], None] = {}
        for mu in sorted(within.closure(), key=_literal_order):
            responsible = within.of(mu)

            def not_lower(s: Rules, responsible: tuple[Rules, ...] = responsible) -> bool:
                return any(not set_lower(s, b) for b in responsible)

            for s, fact in self._options(view, negate(mu), state, not_lower):
                if fact is None:
                    plain.setdefault(s)
                else:
                    abduced.setdefault((s, fact))
        ordered: list[tuple[Rules, HappensAt | None]] = [(s, None) for s in sorted(plain, key=rules_key)]
        ordered.extend(abduced)
        return ordered

    def _step(
        self,
        rules: Rules,
        state: AbductionState,
        path: list[tuple[Rules, Rules]],
        attacker: Rules,
        options: list[tuple[Rules, HappensAt | None]],
        event: TraceEvent,
    ) -> tuple[Rules, AbductionState, list[tuple[Rules, Rules]]] | None:
        for added, fact in options:
            next_state = state
            if fact is not None:
                next_state = state.extended(self.problem, fact)
                _emit(self.trace, TraceEvent.ABDUCE, f"{fact.action}@{fact.time}")
            _emit(self.trace, event, fmt_rules(added))
            found = self._visit(rules | added, next_state, [*path, (attacker, added)])
            if found is not None:
                return found
        return None

    def _visit(
        self,
        rules: Rules,
        state: AbductionState,
        path: list[tuple[Rules, Rules]],
    ) -> tuple[Rules, AbductionState, list[tuple[Rules, Rules]]] | None:
        key = (rules, state.abduced)
        if key in self.visited:
            return None
        self.visited.add(key)
        self.budget.spend()
        _emit(self.trace, TraceEvent.NODE, f"{fmt_rules(rules)} with {fmt_facts(state.abduced)}")

        view = self.program.view(state.abduced)
        if view.self_attacking(rules):
            return None

        confirmation = view.confirmation(rules, self.requirements.extended(state.obligations))
        if confirmation.violated:
            return None
        if confirmation.missing is not None:
            options = self._options(view, confirmation.missing, state)
            return self._step(rules, state, path, frozenset(), options, TraceEvent.COUNTER)

        undefended = next(view.undefended(rules), None)
        if undefended is not None:
            _, attacker = undefended
            _emit(self.trace, TraceEvent.ATTACK, fmt_rules(attacker))
            return self._step(rules, state, path, attacker, self._counters(view, attacker, state), TraceEvent.COUNTER)

        return rules, state, path


def _suspended(view: ProgramView, rules: Rules, trace: Trace | None) -> list[DerivationNode]:
    """Generation-based attacks on the root that would need one more fact to go live."""
    nodes: list[DerivationNode] = []
    derived = sorted(view.within(rules).closure(), key=_literal_order)
    for lit in derived:
        for attacker, fact in abductive_supports(view, negate(lit), latest_first=False):
            node = DerivationNode(attacker, NodeStatus.SUSPENDED, frozenset((fact,)))
            nodes.append(node)
            _emit(trace, TraceEvent.SUSPEND, f"{fmt_rules(attacker)} needs {fact.action}@{fact.time}")
    return nodes


def _tree(
    rules: Rules,
    path: list[tuple[Rules, Rules]],
    suspended: list[DerivationNode],
    state: AbductionState,
) -> DerivationNode:
    root = DerivationNode(rules)
    for attacker, counter in path:
        if attacker:
            root.children.append(DerivationNode(attacker, NodeStatus.DEFEATED, children=[DerivationNode(counter)]))
    for node in suspended:
        if node.required <= state.abduced:
            node.status = NodeStatus.DEFEATED
        root.children.append(node)
    return root


def successful_derivation(
    prog: ArgumentationProgram,
    delta: Iterable[HappensAt],
    s0: Iterable[ArgumentRule],
    *,
    requirements: Requirements | None = None,
    budget: Budget | None = None,
    trace: Trace | None = None,
) -> Derivation | None:
    """Grow `s0` into an admissible set confirming `requirements` (default: the program's).

    Returns:
        Derivation | None: The admissible superset, or None when the search is exhausted

    Raises:
        CapExceededError: If the node budget runs out
    """
    state = AbductionState(frozenset(delta))
    search = _Search(prog, requirements or prog.requirements, budget=budget or Budget(), trace=trace)
    found = search.run(frozenset(s0), state)
    if found is None:
        log.debug("successful derivation exhausted after %d node(s)", len(search.visited))
        return None
    rules, final, path = found
    return Derivation(rules, final, _tree(rules, path, [], final))


def failed_derivation(
    prog: ArgumentationProgram,
    delta: Iterable[HappensAt],
    s0: Iterable[ArgumentRule],
    *,
    requirements: Requirements | None = None,
    budget: Budget | None = None,
    trace: Trace | None = None,
) -> FailedDerivation:
    """Confirm that no admissible superset of `s0` exists, or return one as counterexample."""
    found = successful_derivation(prog, delta, s0, requirements=requirements, budget=budget, trace=trace)
    return FailedDerivation(None if found is None else found.arguments)


def extended_successful_derivation(
    prog: ArgumentationProgram,
    state: AbductionState,
    s0: Iterable[ArgumentRule],
    *,
    max_abductions: int | None = None,
    budget: Budget | None = None,
    trace: Trace | None = None,
) -> Derivation | None:
    """Successful derivation that may abduce facts so that counterattacks (or supports) exist.

    The constraint set carries the precondition obligations of every event,
    abduced ones included.

    Suspended nodes are recorded and traced only; they do not steer the search.
    Attackers that depend on events not yet abduced are refuted later through
    `extended_failed_derivation`.
    """
    problem = prog.problem
    limit = len(problem.actions) * problem.horizon
    if max_abductions is not None:
        limit = min(limit, max_abductions)
    root = frozenset(s0)
    suspended = _suspended(prog.view(state.abduced), root, trace)

    budget = budget or Budget()

    # fewest new facts first
    found = None
    for allowed in range(limit + 1):
        search = _Search(prog, prog.requirements, budget=budget, trace=trace, max_abductions=allowed)
        found = search.run(root, state)
        if found is not None:
            break
    if found is None:
        return None
    rules, final, path = found
    new_facts = final.abduced - state.abduced
    for node in suspended:
        if node.required <= new_facts:
            _emit(trace, TraceEvent.ATTACK, f"{fmt_rules(node.arguments)} (resumed)")
    log.debug("extended derivation abduced %s", fmt_facts(new_facts))
    return Derivation(rules, final, _tree(rules, path, suspended, final))


def _refuting_facts(view: ProgramView, witness: Rules, before: int) -> list[HappensAt]:
    """Facts whose effects conflict with a literal of the witness, earliest tick first."""
    facts: set[HappensAt] = set()
    for lit in view.within(witness).closure():
        facts.update(fact for _, fact in abductive_supports(view, negate(lit), before=before))
    return sorted(facts, key=lambda f: (f.time, f.action))


class _Refutation:
    def __init__(
        self,
        program: ArgumentationProgram,
        target: Rules,
        *,
        before: int,
        budget: Budget,
        trace: Trace | None,
    ) -> None:
        self.program = program
        self.target = target
        self.before = before
        self.budget = budget
        self.trace = trace

    def _consistent(self, state: AbductionState) -> bool:
        return successful_derivation(self.program, state.abduced, (), budget=self.budget) is not None

    def run(self, state: AbductionState, depth: int) -> AbductionState | None:
        # obligations stay out of the constraint set: they are targets of their own refutations
        witness = successful_derivation(self.program, state.abduced, self.target, budget=self.budget)
        if witness is None:
            return state if self._consistent(state) else None
        if depth == 0:
            return None
        view = self.program.view(state.abduced)
        for fact in _refuting_facts(view, witness.arguments, self.before):
            _emit(self.trace, TraceEvent.ABDUCE, f"{fact.action}@{fact.time} against {fmt_rules(self.target)}")
            found = self.run(state.extended(self.program.problem, fact), depth - 1)
            if found is not None:
                return found
        return None


def extended_failed_derivation(
    prog: ArgumentationProgram,
    state: AbductionState,
    r: Iterable[ArgumentRule],
    *,
    before: int | None = None,
    max_depth: int = DEFAULT_ABDUCTION_DEPTH,
    budget: Budget | None = None,
    trace: Trace | None = None,
) -> AbductionState | None:
    """Abduce facts until no admissible superset of `r` exists (fewest facts first).

    Args:
        prog: Argumentation program
        state: Facts abduced so far
        r: The set to refute
        before: Abduced facts must happen strictly before this tick (default: horizon)
        max_depth: Most facts added on top of `state`
        budget: Shared node budget
        trace: Optional transcript

    Returns:
        AbductionState | None: The extended state, or None if every abduction within bounds
        leaves an admissible superset
    """
    problem = prog.problem
    depth_limit = min(max_depth, len(problem.actions) * problem.horizon)
    target = frozenset(r)
    refutation = _Refutation(
        prog,
        target,
        before=problem.horizon if before is None else before,
        budget=budget or Budget(),
        trace=trace,
    )
    for depth in range(depth_limit + 1):
        found = refutation.run(state, depth)
        if found is not None:
            if found.abduced != state.abduced:
                log.debug("refuted %s by abducing %s", fmt_rules(target), fmt_facts(found.abduced - state.abduced))
            return found
    return None


@dataclass(frozen=True, slots=True)
class Candidate:
    """A root set of arguments deriving the goal and the facts it needs."""

    arguments: Rules
    abduced: frozenset[HappensAt]

    def sort_key(self) -> tuple[int, tuple[tuple[int, str], ...], object]:
        facts = tuple(sorted((-f.time, f.action) for f in self.abduced))
        return (len(self.abduced), facts, rules_key(self.arguments))


def _goal_options(view: ProgramView, g: HoldsAt, *, settled: bool) -> list[Candidate]:
    options: list[Candidate] = []
    if settled:
        options.append(Candidate(frozenset((assumption(g),)), frozenset()))
    for since in range(g.time):
        options.extend(
            Candidate(body | {generation(g, since)}, frozenset()) for body in view.base.bodies(g.literal, since)
        )
    options.extend(Candidate(rules, frozenset((fact,))) for rules, fact in abductive_supports(view, g))
    return options


def abduce_support(
    prog: ArgumentationProgram,
    goal: Iterable[HoldsAt],
    *,
    max_fluents: int = 16,
) -> Iterator[Candidate]:
    """Stream root sets deriving every goal literal, fewest abduced facts first, latest ticks first.

    A goal literal is supported by a bare assumption only when the domain
    already entails it; otherwise it needs a generation rule whose body fires.
    """
    view = prog.view()
    goals = sorted(goal, key=_literal_order)
    per_goal = [
        _goal_options(view, g, settled=sceptical(prog, (), g, max_fluents=max_fluents)) for g in goals
    ]

    merged: dict[Candidate, None] = {}
    for combo in itertools.product(*per_goal):
        candidate = Candidate(
            frozenset().union(*(c.arguments for c in combo)),
            frozenset().union(*(c.abduced for c in combo)),
        )
        if candidate in merged:
            continue
        if prog.view(candidate.abduced).self_attacking(candidate.arguments):
            continue
        merged[candidate] = None

    for candidate in sorted(merged, key=Candidate.sort_key):
        log.debug("support candidate %s with %s", fmt_rules(candidate.arguments), fmt_facts(candidate.abduced))
        yield candidate
