from __future__ import annotations

from itertools import chain, combinations

import pytest
from builders import happens, holds

from e_planner.common.config import EngineConfig
from e_planner.common.error import EngineMismatchError, NoPlanError, ValidationError
from e_planner.derivation import Trace
from e_planner.models import PlanVerdict, classify_plan
from e_planner.parse import parse_problem
from e_planner.planner import (
    PlanKind,
    PlanOutcome,
    Planner,
    check_assumptions,
    format_plan,
    plan_and_verify,
    safe_plan,
    weak_plan,
)


class TestWeak:
    def test_car_with_unknown_petrol(self, load):
        outcome = weak_plan(load("car_weak"))
        assert outcome.kind is PlanKind.WEAK
        assert outcome.plan == {happens("TurnOn", 3)}
        assert outcome.assumptions == {holds("Petrol", 3)}

    def test_vaccine_assumes_blood_type(self, load):
        outcome = weak_plan(load("vaccine"))
        assert outcome.plan == {happens("InjectA", 2)}
        assert outcome.assumptions == {holds("TypeO", 2)}

    def test_ramification_assumes_other_type(self, load):
        outcome = weak_plan(load("ramification"))
        assert outcome.plan == {happens("InjectB", 4)}
        assert outcome.assumptions == {holds("-TypeO", 4)}

    def test_settled_weak_plan_is_reported_safe(self, load):
        outcome = weak_plan(load("car_safe"))
        assert outcome.kind is PlanKind.SAFE
        assert outcome.assumptions == frozenset()

    def test_assumptions_are_not_entailed(self, load):
        p = load("car_weak")
        assert not check_assumptions(p, weak_plan(p))


class TestSafe:
    @pytest.mark.parametrize(
        ("name", "plan"),
        [
            ("car_safe", {happens("TurnOn", 3)}),
            ("car_weak", {happens("TurnOn", 3), happens("Fill", 0)}),
            ("vaccine", {happens("InjectA", 2), happens("InjectB", 0)}),
            ("infection", {happens("InjectC", 4), happens("InjectD", 0)}),
            ("ramification", {happens("InjectB", 4), happens("InjectE", 0)}),
        ],
    )
    def test_fixture_plans(self, load, name, plan):
        p = load(name)
        outcome = safe_plan(p)
        assert outcome.kind is PlanKind.SAFE
        assert outcome.plan == plan
        assert classify_plan(p, outcome.plan).tag is PlanVerdict.SAFE

    def test_trace_is_collected(self, load):
        trace = Trace()
        outcome = safe_plan(load("car_weak"), trace=trace)
        assert outcome.trace is trace
        assert any(line.startswith("ABDUCE Fill@0") for line in trace.lines)


class TestNoPlan:
    def test_missing_goal(self):
        with pytest.raises(ValidationError, match="no goal"):
            Planner(parse_problem("fluent F. horizon 1."))

    def test_unreachable_goal(self):
        p = parse_problem("fluent F. action A. horizon 2. -F holds-at 0. goal F holds-at 2.")
        with pytest.raises(NoPlanError, match="no weak plan"):
            weak_plan(p)
        with pytest.raises(NoPlanError, match="no safe plan"):
            safe_plan(p)

        events = [happens("A", t) for t in range(p.horizon + 1)]
        for delta in chain.from_iterable(combinations(events, k) for k in range(len(events) + 1)):
            assert classify_plan(p, delta).tag is PlanVerdict.NOT_A_PLAN


class TestVerify:
    def test_plan_and_verify(self, load):
        verified = plan_and_verify(load("car_weak"))
        assert verified.verdict.tag is PlanVerdict.SAFE
        assert verified.outcome.plan == {happens("TurnOn", 3), happens("Fill", 0)}

    def test_overclaimed_plan_is_a_mismatch(self, load):
        planner = Planner(load("car_weak"))
        with pytest.raises(EngineMismatchError):
            planner.verify(PlanOutcome(frozenset({happens("TurnOn", 3)}), PlanKind.SAFE))

    def test_weak_claim_accepts_weak_verdict(self, load):
        planner = Planner(load("car_weak"))
        verified = planner.verify(PlanOutcome(frozenset({happens("TurnOn", 3)}), PlanKind.WEAK))
        assert verified.verdict.tag is PlanVerdict.WEAK

    def test_minimize_drops_redundant_actions(self, load):
        planner = Planner(load("car_safe"), EngineConfig(minimize_plan=True))
        outcome = PlanOutcome(frozenset({happens("TurnOn", 2), happens("TurnOn", 3)}), PlanKind.SAFE)
        assert planner.minimize(outcome).plan == {happens("TurnOn", 2)}


class TestOutcome:
    def test_safe_outcome_rejects_assumptions(self):
        with pytest.raises(ValueError, match="no assumptions"):
            PlanOutcome(frozenset(), PlanKind.SAFE, frozenset({holds("Petrol", 3)}))

    def test_format(self):
        outcome = PlanOutcome(
            frozenset({happens("TurnOn", 3), happens("Fill", 0)}),
            PlanKind.WEAK,
            frozenset({holds("-Running", 1), holds("Petrol", 3)}),
        )
        assert format_plan(outcome) == "WEAK\nFill @ 0\nTurnOn @ 3\nASSUMES -Running @ 1\nASSUMES Petrol @ 3\n"
