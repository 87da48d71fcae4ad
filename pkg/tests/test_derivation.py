from __future__ import annotations

import pytest
from builders import happens

from e_planner.argumentation import ArgumentRule, is_admissible, translate
from e_planner.common.error import CapExceededError
from e_planner.derivation import (
    AbductionState,
    Budget,
    Candidate,
    NodeStatus,
    Trace,
    TraceEvent,
    abduce_support,
    extended_failed_derivation,
    extended_successful_derivation,
    failed_derivation,
    fmt_facts,
    successful_derivation,
)
from e_planner.parse import parse_problem


def rules(*texts: str) -> frozenset[ArgumentRule]:
    return frozenset(ArgumentRule.parse(t) for t in texts)


ROOT = rules("PG[Running,7;5]", "PA[Petrol,5]")


class TestSuccessful:
    def test_grows_root_into_admissible_set(self, load):
        prog = translate(load("car"))
        found = successful_derivation(prog, (), ROOT)
        assert found is not None
        assert found.arguments >= ROOT
        assert is_admissible(prog, (), found.arguments)

    def test_self_attacking_root_fails(self, load):
        prog = translate(load("car"))
        assert successful_derivation(prog, (), rules("PA[Petrol,5]", "NA[Petrol,5]")) is None

    def test_counter_needs_blood_type(self, load):
        prog = translate(load("infection"))
        found = successful_derivation(prog, [happens("InjectC", 1)], rules("NA[Protected,5]"))
        assert found is not None
        # InjectC@1 is neutralized by TypeA being false; the observed infection then needs Weak
        assert ArgumentRule.parse("NA[TypeA,1]") in found.arguments
        assert ArgumentRule.parse("PA[Weak,2]") in found.arguments
        assert is_admissible(prog, [happens("InjectC", 1)], found.arguments)

    def test_budget(self, load):
        with pytest.raises(CapExceededError) as e:
            successful_derivation(translate(load("car")), (), ROOT, budget=Budget(1))
        assert e.value.limit == "node_budget"


class TestFailed:
    def test_known_petrol_cannot_be_denied(self, load):
        assert failed_derivation(translate(load("car_safe")), (), rules("NA[Petrol,3]")).confirmed

    def test_unknown_petrol_can(self, load):
        refuted = failed_derivation(translate(load("car_weak")), (), rules("NA[Petrol,3]"))
        assert not refuted.confirmed
        assert ArgumentRule.parse("NA[Petrol,3]") in refuted.counterexample

    def test_empty_set_is_its_own_counterexample(self):
        prog = translate(parse_problem("fluent F. action A. horizon 2. A initiates F."))
        assert failed_derivation(prog, (), ()).counterexample == frozenset()


class TestExtendedSuccessful:
    def test_no_extra_facts_when_none_are_needed(self, load):
        p = load("car_weak")
        state = AbductionState.start(p, [happens("TurnOn", 3)])
        s0 = rules("PG[Running,4;3]", "PA[Petrol,3]")
        found = extended_successful_derivation(translate(p), state, s0)
        assert found is not None
        assert found.state.abduced == {happens("TurnOn", 3)}
        assert found.arguments >= s0

    def test_suspended_attacks_are_recorded(self, load):
        p = load("car_weak")
        trace = Trace()
        state = AbductionState.start(p, [happens("TurnOn", 3)])
        s0 = rules("PG[Running,4;3]", "PA[Petrol,3]")
        found = extended_successful_derivation(translate(p), state, s0, trace=trace)
        assert found is not None
        suspended = [n for n in found.tree.children if n.status is NodeStatus.SUSPENDED]
        assert any(n.required == {happens("Empty", 0)} for n in suspended)
        assert any(line.startswith(str(TraceEvent.SUSPEND)) for line in trace.lines)
        assert any(line.startswith(str(TraceEvent.NODE)) for line in trace.lines)
        assert "[suspended]" in "\n".join(found.tree.render())

    def test_obligations_follow_abduced_facts(self, load):
        p = load("car_weak")
        state = AbductionState.start(p, [happens("Fill", 2)])
        assert state.obligations == p.obligations([happens("Fill", 2)])
        assert state.extended(p, happens("Fill", 0)).obligations == p.obligations(
            [happens("Fill", 0), happens("Fill", 2)]
        )


class TestExtendedFailed:
    def test_fill_refutes_running_out_of_petrol(self, load):
        p = load("car_weak")
        state = AbductionState.start(p, [happens("TurnOn", 3)])
        found = extended_failed_derivation(translate(p), state, rules("NA[Running,4]"), before=4)
        assert found is not None
        added = found.abduced - state.abduced
        assert [h.action for h in added] == ["Fill"]
        assert all(h.time < 3 for h in added)

    def test_second_vaccine_covers_other_blood_type(self, load):
        p = load("vaccine")
        state = AbductionState.start(p, [happens("InjectA", 2)])
        found = extended_failed_derivation(translate(p), state, rules("NA[Protected,3]"), before=3)
        assert found is not None
        assert {h.action for h in found.abduced - state.abduced} == {"InjectB"}

    def test_already_refuted_set_keeps_state(self, load):
        p = load("car_weak")
        state = AbductionState.start(p, [happens("TurnOn", 3)])
        found = extended_failed_derivation(translate(p), state, rules("PA[Petrol,2]", "NA[Petrol,2]"))
        assert found == state

    def test_no_room_to_refute(self, load):
        p = load("car_weak")
        state = AbductionState.start(p)
        assert extended_failed_derivation(translate(p), state, rules("NA[Running,4]"), max_depth=0) is None


class TestAbduceSupport:
    def test_latest_turn_on_first(self, load):
        first = next(abduce_support(translate(load("car_safe")), load("car_safe").goal))
        assert first == Candidate(rules("PG[Running,4;3]", "PA[Petrol,3]"), frozenset({happens("TurnOn", 3)}))

    def test_vaccine_alternatives(self, load):
        p = load("vaccine")
        stream = abduce_support(translate(p), p.goal)
        first, second = next(stream), next(stream)
        assert first.abduced == {happens("InjectA", 2)}
        assert ArgumentRule.parse("PA[TypeO,2]") in first.arguments
        assert second.abduced == {happens("InjectB", 2)}
        assert ArgumentRule.parse("NA[TypeO,2]") in second.arguments

    def test_entailed_goal_needs_no_action(self):
        p = parse_problem("fluent F. action A. horizon 2. F holds-at 0. goal F holds-at 2.")
        first = next(abduce_support(translate(p), p.goal))
        assert first == Candidate(rules("PA[F,2]"), frozenset())


def test_trace_write(tmp_path):
    trace = Trace()
    trace.emit(TraceEvent.ABDUCE, "Fill@0")
    out = tmp_path / "trace.txt"
    trace.write(out)
    assert out.read_text(encoding="utf-8") == "ABDUCE Fill@0\n"


def test_fmt_facts():
    assert fmt_facts([happens("TurnOn", 3), happens("Fill", 0)]) == "{Fill@0, TurnOn@3}"
