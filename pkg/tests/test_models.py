from __future__ import annotations

import pytest
from builders import happens, holds

from e_planner.common.error import CapExceededError
from e_planner.models import (
    PlanResultClass,
    PlanVerdict,
    classify_plan,
    consistent,
    entails,
    is_model,
    models,
    naive_models,
    precondition_instances,
    satisfies_preconditions,
    simulate,
)
from e_planner.parse import parse_problem

NEEDS_OFF = """
fluent F. action A, B. horizon 3.
A initiates F. B needs {-F}.
A happens-at 0. B happens-at 2.
goal F holds-at 3.
"""


class TestModels:
    def test_car_has_two_models(self, load):
        assert len(models(load("car"))) == 2

    def test_car_entails_running_after_turn_on(self, load):
        assert entails(load("car"), [holds("Running", 7)])
        assert entails(load("car"), [holds("Petrol", 5)])

    def test_emptied_tank_blocks_entailment(self, load):
        car = load("car_empty")
        assert not entails(car, [holds("Running", 7)])
        assert entails(car, [holds("-Petrol", 5)])

    def test_simulated_runs_are_models(self, load):
        car = load("car")
        for m in models(car):
            assert is_model(m, car)

    def test_naive_enumeration_agrees(self, load):
        car = load("car")
        assert naive_models(car) == tuple(sorted(models(car)))

    def test_naive_cell_cap(self, load):
        with pytest.raises(CapExceededError):
            naive_models(load("car"), max_cells=10)

    def test_fluent_cap(self, load):
        with pytest.raises(CapExceededError) as e:
            models(load("infection"), max_fluents=3)
        assert e.value.limit == "max_fluents"

    def test_simulate_clash(self):
        p = parse_problem(
            "fluent F. action A, B. horizon 2. A initiates F. B terminates F. A happens-at 0. B happens-at 0."
        )
        assert simulate(p, {"F": False}) is None
        assert not consistent(p)

    def test_inconsistent_domain_entails_everything(self):
        p = parse_problem("fluent F. horizon 2. F holds-at 1. -F holds-at 1.")
        assert not consistent(p)
        assert entails(p, [holds("-F", 2)])

    def test_constraint_filters_initial_states(self, load):
        for m in models(load("ramification")):
            for t in range(m.horizon + 1):
                assert not m.value("TypeO", t) or m.value("Strong", t)

    def test_render_table(self, load):
        table = models(load("car"))[0].render().splitlines()
        assert table[0].endswith("| 0 1 2 3 4 5 6 7 8")
        assert table[1].startswith("Petrol ")


class TestPreconditions:
    def test_instances(self, load):
        car = load("car_weak").with_occurrences([happens("Fill", 1)])
        assert precondition_instances(car) == {holds("-Running", 1)}
        assert satisfies_preconditions(car)

    def test_unsatisfied(self):
        assert not satisfies_preconditions(parse_problem(NEEDS_OFF))


class TestClassify:
    def test_weak_plan_needs_petrol(self, load):
        verdict = classify_plan(load("car_weak"), [happens("TurnOn", 3)])
        assert verdict.tag is PlanVerdict.WEAK
        assert verdict.assumptions == {holds("Petrol", 3)}

    def test_filling_first_makes_it_safe(self, load):
        verdict = classify_plan(load("car_weak"), [happens("TurnOn", 3), happens("Fill", 1)])
        assert verdict == PlanResultClass(PlanVerdict.SAFE)

    def test_empty_plan_is_not_a_plan(self, load):
        assert classify_plan(load("car_weak"), []).tag is PlanVerdict.NOT_A_PLAN

    def test_known_petrol_is_safe(self, load):
        assert classify_plan(load("car_safe"), [happens("TurnOn", 3)]).tag is PlanVerdict.SAFE

    def test_vaccine_weak_on_blood_type(self, load):
        verdict = classify_plan(load("vaccine"), [happens("InjectA", 2)])
        assert verdict.tag is PlanVerdict.WEAK
        assert verdict.assumptions == {holds("TypeO", 2)}

    def test_vaccine_both_injections(self, load):
        plan = [happens("InjectA", 2), happens("InjectB", 0)]
        assert classify_plan(load("vaccine"), plan).tag is PlanVerdict.SAFE

    def test_same_tick_injections_are_safe_too(self, load):
        plan = [happens("InjectA", 1), happens("InjectB", 1)]
        assert classify_plan(load("vaccine"), plan).tag is PlanVerdict.SAFE

    def test_violated_precondition_is_not_a_plan(self):
        p = parse_problem(NEEDS_OFF).without_occurrences()
        assert classify_plan(p, [happens("A", 0), happens("B", 2)]).tag is PlanVerdict.NOT_A_PLAN

    def test_verdict_rejects_stray_assumptions(self):
        with pytest.raises(ValueError, match="cannot carry assumptions"):
            PlanResultClass(PlanVerdict.SAFE, frozenset({holds("F", 1)}))
