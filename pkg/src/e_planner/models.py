"""Model-theoretic oracle: models, consistency, entailment and plan classification over integer time."""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from enum import StrEnum
from typing import TYPE_CHECKING

from e_planner.common.error import CapExceededError
from e_planner.common.log import get_log
from e_planner.core import CausalLaw, Effect, FluentLiteral, HoldsAt, condition_at

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Mapping

    from e_planner.core import HappensAt, PlanningProblem, Precondition

log = get_log("models")

DEFAULT_MAX_FLUENTS = 16
NAIVE_MAX_CELLS = 20


@dataclass(frozen=True, order=True, slots=True)
class Interpretation:
    """Total truth assignment over fluents x {0..horizon}; `table[i][t]` is fluent `fluents[i]` at `t`."""

    fluents: tuple[str, ...]
    table: tuple[tuple[bool, ...], ...]

    @property
    def horizon(self) -> int:
        return len(self.table[0]) - 1 if self.table else 0

    def value(self, fluent: str, t: int) -> bool:
        return self.table[self.fluents.index(fluent)][t]

    def holds(self, lit: FluentLiteral, t: int) -> bool:
        return self.value(lit.fluent, t) == lit.positive

    def initial_state(self) -> frozenset[HoldsAt]:
        rows = zip(self.fluents, self.table, strict=True)
        return frozenset(HoldsAt(FluentLiteral(f, row[0]), 0) for f, row in rows)

    @classmethod
    def from_mapping(
        cls,
        assignment: Mapping[tuple[str, int], bool],
        fluents: Iterable[str],
        horizon: int,
    ) -> Interpretation:
        order = tuple(sorted(fluents))
        return cls(order, tuple(tuple(assignment[f, t] for t in range(horizon + 1)) for f in order))

    def render(self) -> str:
        """Fluent x time table, `1`/`0` cells."""
        width = max((len(f) for f in self.fluents), default=0)
        header = " " * width + " | " + " ".join(str(t % 10) for t in range(self.horizon + 1))
        rows = [
            f"{f:<{width}} | " + " ".join("1" if v else "0" for v in row)
            for f, row in zip(self.fluents, self.table, strict=True)
        ]
        return "\n".join([header, *rows])


class PlanVerdict(StrEnum):
    SAFE = "SAFE"
    WEAK = "WEAK"
    NOT_A_PLAN = "NOT-A-PLAN"


@dataclass(frozen=True, slots=True)
class PlanResultClass:
    tag: PlanVerdict
    assumptions: frozenset[HoldsAt] = frozenset()
    witness: Interpretation | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.tag is not PlanVerdict.WEAK and self.assumptions:
            msg = f"{self.tag} verdict cannot carry assumptions"
            raise ValueError(msg)


def satisfies_at(h: Interpretation, cond: Iterable[FluentLiteral], t: int) -> bool:
    return all(h.holds(lit, t) for lit in cond)


def _laws_by_time(d: PlanningProblem) -> dict[int, list[CausalLaw]]:
    by_time: dict[int, list[CausalLaw]] = defaultdict(list)
    for occ in d.occurrences:
        by_time[occ.time].extend(d.laws_for(occ.action))
    return by_time


def change_points(h: Interpretation, d: PlanningProblem, fluent: str) -> tuple[frozenset[int], frozenset[int]]:
    """Initiation and termination points of `fluent` in `h` relative to `d`."""
    inits: set[int] = set()
    terms: set[int] = set()
    for t, laws in _laws_by_time(d).items():
        for law in laws:
            if law.fluent == fluent and satisfies_at(h, law.condition, t):
                (inits if law.effect is Effect.INITIATES else terms).add(t)
    return frozenset(inits), frozenset(terms)


def _satisfies_statics(h: Interpretation, d: PlanningProblem) -> bool:
    if not all(h.holds(obs.literal, obs.time) for obs in d.observations if obs.time <= h.horizon):
        return False
    return all(
        not satisfies_at(h, c.condition, t) or h.holds(c.literal, t)
        for c in d.constraints
        for t in range(h.horizon + 1)
    )


def is_model(h: Interpretation, d: PlanningProblem) -> bool:
    """Check model conditions 1-5 literally, over every ordered pair of timepoints."""
    times = range(h.horizon + 1)
    for f in sorted(d.fluents):
        inits, terms = change_points(h, d, f)
        points = inits | terms
        for t1, t3 in itertools.combinations(times, 2):
            if not any(t1 <= t2 < t3 for t2 in points) and h.value(f, t1) != h.value(f, t3):
                return False
            if t1 in inits and not any(t1 < t2 < t3 for t2 in terms) and not h.value(f, t3):
                return False
            if t1 in terms and not any(t1 < t2 < t3 for t2 in inits) and h.value(f, t3):
                return False
    return _satisfies_statics(h, d)


def simulate(d: PlanningProblem, initial: Mapping[str, bool]) -> Interpretation | None:
    """Run the domain forward from `initial` at tick 0.

    Returns:
        Interpretation | None: The unique run, or None when some fluent is both
        initiated and terminated at one tick (no model extends such a state)
    """
    order = d.fluent_order
    by_time = _laws_by_time(d)
    state = {f: initial[f] for f in order}
    rows: dict[str, list[bool]] = {f: [state[f]] for f in order}

    for t in range(d.horizon):
        effects: dict[str, set[bool]] = defaultdict(set)
        for law in by_time.get(t, ()):
            if all(state[lit.fluent] == lit.positive for lit in law.condition):
                effects[law.fluent].add(law.effect is Effect.INITIATES)
        for f, values in effects.items():
            if len(values) > 1:
                return None
            state[f] = next(iter(values))
        for f in order:
            rows[f].append(state[f])

    return Interpretation(order, tuple(tuple(rows[f]) for f in order))


def _initial_states(order: tuple[str, ...]) -> Iterator[dict[str, bool]]:
    for bits in itertools.product((False, True), repeat=len(order)):
        yield dict(zip(order, bits, strict=True))


def models(d: PlanningProblem, *, max_fluents: int = DEFAULT_MAX_FLUENTS) -> tuple[Interpretation, ...]:
    """All models of the domain part of `d`, by forward simulation from every initial state.

    Raises:
        CapExceededError: If `d` has more than `max_fluents` fluents
    """
    if len(d.fluents) > max_fluents:
        raise CapExceededError("max_fluents", max_fluents)

    found: list[Interpretation] = []
    for initial in _initial_states(d.fluent_order):
        run = simulate(d, initial)
        if run is not None and _satisfies_statics(run, d):
            found.append(run)
    log.debug("%d model(s) over %d initial state(s)", len(found), 2 ** len(d.fluents))
    return tuple(found)


def naive_models(d: PlanningProblem, *, max_cells: int = NAIVE_MAX_CELLS) -> tuple[Interpretation, ...]:
    """All models by checking every assignment of every (fluent, tick) cell; tiny instances only.

    Raises:
        CapExceededError: If |fluents| x (horizon + 1) exceeds `max_cells`
    """
    order = d.fluent_order
    width = d.horizon + 1
    if len(order) * width > max_cells:
        raise CapExceededError("naive enumeration cells", max_cells)

    found: list[Interpretation] = []
    for bits in itertools.product((False, True), repeat=len(order) * width):
        table = tuple(tuple(bits[i * width : (i + 1) * width]) for i in range(len(order)))
        h = Interpretation(order, table)
        if is_model(h, d):
            found.append(h)
    return tuple(sorted(found))


def consistent(d: PlanningProblem, *, max_fluents: int = DEFAULT_MAX_FLUENTS) -> bool:
    return bool(models(d, max_fluents=max_fluents))


def _model_satisfies(m: Interpretation, query: Iterable[HoldsAt]) -> bool:
    return all(m.holds(q.literal, q.time) for q in query)


def entails(d: PlanningProblem, query: Iterable[HoldsAt], *, max_fluents: int = DEFAULT_MAX_FLUENTS) -> bool:
    """True iff every model satisfies every t-proposition of `query` (vacuous when inconsistent)."""
    query = tuple(query)
    return all(_model_satisfies(m, query) for m in models(d, max_fluents=max_fluents))


def precondition_instances(
    d: PlanningProblem,
    preconditions: Iterable[Precondition] | None = None,
) -> frozenset[HoldsAt]:
    """`C(T)` for every p-proposition `A needs C` and every `A happens-at T` in `d`."""
    needs = tuple(d.preconditions if preconditions is None else preconditions)
    return frozenset(
        h
        for occ in d.occurrences
        for p in needs
        if p.action == occ.action
        for h in condition_at(p.condition, occ.time)
    )


def satisfies_preconditions(
    d: PlanningProblem,
    preconditions: Iterable[Precondition] | None = None,
    *,
    max_fluents: int = DEFAULT_MAX_FLUENTS,
) -> bool:
    return entails(d, precondition_instances(d, preconditions), max_fluents=max_fluents)


def _is_safe(d: PlanningProblem, *, max_fluents: int) -> bool:
    ms = models(d, max_fluents=max_fluents)
    obligations = precondition_instances(d)
    return bool(ms) and all(_model_satisfies(m, d.goal) and _model_satisfies(m, obligations) for m in ms)


def _fired_conditions(m: Interpretation, d: PlanningProblem) -> list[tuple[CausalLaw, HappensAt]]:
    return [
        (law, occ)
        for occ in d.occurrences
        for law in d.laws_for(occ.action)
        if occ.time < d.horizon and satisfies_at(m, law.condition, occ.time)
    ]


def _assumption_tiers(m: Interpretation, d: PlanningProblem) -> list[frozenset[HoldsAt]]:
    """Candidate assumption sets read off the witness model, narrowest first."""
    fired = _fired_conditions(m, d)
    static = frozenset(
        HoldsAt(lit, occ.time) for law, occ in fired for lit in law.condition if lit.fluent not in d.effect_fluents
    )
    conditions = frozenset(HoldsAt(lit, occ.time) for law, occ in fired for lit in law.condition)
    return [static, conditions, conditions | m.initial_state()]


def _minimize(d: PlanningProblem, assumptions: frozenset[HoldsAt], *, max_fluents: int) -> frozenset[HoldsAt]:
    kept = set(assumptions)
    for a in sorted(assumptions, key=lambda h: (h.time, h.literal)):
        trial = kept - {a}
        if _is_safe(d.with_observations(trial), max_fluents=max_fluents):
            kept = trial
    return frozenset(kept)


def classify_plan(
    p: PlanningProblem,
    delta: Iterable[HappensAt],
    *,
    max_fluents: int = DEFAULT_MAX_FLUENTS,
) -> PlanResultClass:
    """Classify `delta` as a safe plan, a weak plan (with assumptions), or not a plan.

    Raises:
        CapExceededError: If model enumeration exceeds the cap
    """
    d = p.with_occurrences(delta)
    ms = models(d, max_fluents=max_fluents)
    if not ms:
        return PlanResultClass(PlanVerdict.NOT_A_PLAN)

    if _is_safe(d, max_fluents=max_fluents):
        return PlanResultClass(PlanVerdict.SAFE)

    obligations = precondition_instances(d)
    witness = next((m for m in ms if _model_satisfies(m, d.goal) and _model_satisfies(m, obligations)), None)
    if witness is None:
        return PlanResultClass(PlanVerdict.NOT_A_PLAN)

    *narrow, pinned = _assumption_tiers(witness, d)
    tier = next((a for a in narrow if a and _is_safe(d.with_observations(a), max_fluents=max_fluents)), pinned)
    assumptions = _minimize(d, tier, max_fluents=max_fluents)
    return PlanResultClass(PlanVerdict.WEAK, assumptions, witness)

