"""Randomized cross-checks between the model oracle, the argumentation engine and the planner."""

from __future__ import annotations

import random
from itertools import product

import pytest
from builders import random_problem, random_shape

from e_planner.argumentation import is_admissible, maximal_admissible, sceptical, translate
from e_planner.common.config import EngineConfig
from e_planner.common.error import CapExceededError, NoPlanError
from e_planner.core import FluentLiteral, HappensAt, HoldsAt, validate
from e_planner.models import PlanVerdict, classify_plan, entails, is_model, models, naive_models
from e_planner.parse import parse_problem, render_problem
from e_planner.planner import PlanKind, safe_plan, weak_plan

SEEDS = range(25)
WIDE_SEEDS = range(200)
PLANNING_SEEDS = range(100)
PLANNING_CONFIG = EngineConfig(node_budget=20_000)


def _literals(m) -> frozenset[HoldsAt]:
    return frozenset(
        HoldsAt(FluentLiteral(f, v), t) for f, row in zip(m.fluents, m.table, strict=True) for t, v in enumerate(row)
    )


def _queries(p) -> list[HoldsAt]:
    return [
        HoldsAt(FluentLiteral(f, positive), t)
        for f, t, positive in product(sorted(p.fluents), range(p.horizon + 1), (True, False))
    ]


def _solvable(seed: int):
    """A random problem and a goal that some small set of actions reaches in at least one model."""
    rng = random.Random(seed)
    while True:
        p = random_problem(rng, **random_shape(rng), max_events=0).without_occurrences()
        delta = {HappensAt(rng.choice(sorted(p.actions)), rng.randint(0, p.horizon - 1)) for _ in range(2)}
        ms = models(p.with_occurrences(delta))
        if not ms:
            continue
        f = rng.choice(sorted(p.fluents))
        goal = HoldsAt(FluentLiteral(f, rng.choice(ms).holds(FluentLiteral(f), p.horizon)), p.horizon)
        problem = p.with_goal([goal])
        if classify_plan(problem, delta).tag is not PlanVerdict.NOT_A_PLAN:
            return problem


def _planned(plan, problem):
    try:
        return plan(problem, PLANNING_CONFIG)
    except (NoPlanError, CapExceededError):
        return None


@pytest.mark.parametrize("seed", SEEDS)
def test_random_problems_are_well_formed(seed):
    p = random_problem(random.Random(seed), with_constraints=True)
    assert validate(p) == []
    assert parse_problem(render_problem(p)) == p


@pytest.mark.parametrize("seed", SEEDS)
def test_simulation_matches_naive_enumeration(seed):
    p = random_problem(random.Random(seed), horizon=3)
    assert tuple(sorted(models(p))) == naive_models(p, max_cells=8)
    for m in models(p):
        assert is_model(m, p)


@pytest.mark.slow
@pytest.mark.parametrize("seed", WIDE_SEEDS)
def test_simulation_matches_naive_enumeration_up_to_14_cells(seed):
    rng = random.Random(seed)
    p = random_problem(rng, **random_shape(rng, max_cells=14), with_constraints=True)
    assert len(p.fluents) * (p.horizon + 1) <= 14
    assert tuple(sorted(models(p))) == naive_models(p, max_cells=14)


@pytest.mark.slow
@pytest.mark.parametrize("seed", SEEDS)
def test_extensions_match_models(seed):
    p = random_problem(random.Random(seed), with_constraints=True)
    prog = translate(p)
    exts = maximal_admissible(prog)
    assert {ext.literals() for ext in exts} == {_literals(m) for m in models(p)}
    for ext in exts:
        assert is_admissible(prog, (), ext.rules)


@pytest.mark.slow
@pytest.mark.parametrize("seed", WIDE_SEEDS)
def test_sceptical_matches_entailment_on_every_query(seed):
    rng = random.Random(seed)
    p = random_problem(rng, **random_shape(rng))
    exts = maximal_admissible(translate(p))
    for q in _queries(p):
        assert all(ext.holds(q) for ext in exts) == entails(p, [q]), str(q)
    if not p.observations:
        assert len(exts) == len(models(p))


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(10))
def test_sceptical_matches_entailment(seed):
    rng = random.Random(seed)
    p = random_problem(rng)
    prog = translate(p)
    for _ in range(3):
        lit = HoldsAt(FluentLiteral(rng.choice(sorted(p.fluents)), rng.random() < 0.5), rng.randint(0, p.horizon))
        assert sceptical(prog, (), lit) == entails(p, [lit])


@pytest.mark.slow
@pytest.mark.parametrize("seed", PLANNING_SEEDS)
def test_planner_outputs_pass_oracle(seed):
    problem = _solvable(seed)

    weak = _planned(weak_plan, problem)
    if weak is not None:
        verdict = classify_plan(problem, weak.plan).tag
        assert verdict is not PlanVerdict.NOT_A_PLAN
        if weak.kind is PlanKind.SAFE:
            assert verdict is PlanVerdict.SAFE

    safe = _planned(safe_plan, problem)
    if safe is not None:
        assert safe.kind is PlanKind.SAFE
        assert classify_plan(problem, safe.plan).tag is PlanVerdict.SAFE
