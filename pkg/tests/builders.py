"""Small helpers for building literals, events and random problems in tests."""

from __future__ import annotations

from typing import TYPE_CHECKING

from e_planner.core import (
    CausalLaw,
    Constraint,
    Effect,
    FluentLiteral,
    HappensAt,
    HoldsAt,
    PlanningProblem,
    Precondition,
    canonical_condition,
)

if TYPE_CHECKING:
    import random


def lit(text: str) -> FluentLiteral:
    return FluentLiteral(text.removeprefix("-"), not text.startswith("-"))


def holds(text: str, t: int) -> HoldsAt:
    return HoldsAt(lit(text), t)


def happens(action: str, t: int) -> HappensAt:
    return HappensAt(action, t)


def random_problem(
    rng: random.Random,
    *,
    n_fluents: int = 2,
    n_actions: int = 2,
    horizon: int = 3,
    max_laws: int = 4,
    max_observations: int = 1,
    max_events: int = 2,
    with_constraints: bool = False,
    with_preconditions: bool = True,
) -> PlanningProblem:
    """A small well-formed problem: a few laws, events and observations drawn from `rng`.

    Every action gets at least one law; the total stays within `max(max_laws, n_actions)`.
    """
    fluents = [f"F{i}" for i in range(n_fluents)]
    actions = [f"A{i}" for i in range(n_actions)]

    def random_literal(exclude: str | None = None) -> FluentLiteral:
        f = rng.choice([f for f in fluents if f != exclude] or fluents)
        return FluentLiteral(f, rng.random() < 0.5)

    domain: set = set()
    for i in range(rng.randint(n_actions, max(max_laws, n_actions))):
        a = actions[i] if i < n_actions else rng.choice(actions)
        effect = rng.choice(list(Effect))
        fluent = rng.choice(fluents)
        cond = canonical_condition([random_literal(fluent)] if rng.random() < 0.5 else [])
        domain.add(CausalLaw(a, effect, fluent, cond))
    for _ in range(rng.randint(0, max_events)):
        domain.add(HappensAt(rng.choice(actions), rng.randint(0, horizon - 1)))
    for _ in range(rng.randint(0, max_observations)):
        domain.add(HoldsAt(random_literal(), rng.randint(0, horizon)))
    if with_constraints and n_fluents > 1:
        head = random_literal()
        domain.add(Constraint(head, canonical_condition([random_literal(head.fluent)])))

    preconditions = set()
    if with_preconditions and rng.random() < 0.3:
        preconditions.add(Precondition(rng.choice(actions), (random_literal(),)))

    return PlanningProblem(
        fluents=frozenset(fluents),
        actions=frozenset(actions),
        horizon=horizon,
        domain=frozenset(domain),
        preconditions=frozenset(preconditions),
    )


def random_shape(rng: random.Random, *, max_cells: int | None = None) -> dict[str, int]:
    """Sizes for `random_problem`: up to 4 fluents, 3 actions, horizon 5, 4 laws and 2 observations.

    With `max_cells`, fluents x (horizon + 1) stays within it.
    """
    while True:
        n_fluents, horizon = rng.randint(1, 4), rng.randint(1, 5)
        if max_cells is None or n_fluents * (horizon + 1) <= max_cells:
            break
    return {
        "n_fluents": n_fluents,
        "n_actions": rng.randint(1, 3),
        "horizon": horizon,
        "max_laws": 4,
        "max_observations": 2,
    }
