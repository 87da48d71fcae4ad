"""Tree-to-statement transformer for the Language E grammar."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

from lark import Token, Transformer, v_args

from e_planner.core import (
    CausalLaw,
    Constraint,
    Effect,
    FluentLiteral,
    HappensAt,
    HoldsAt,
    Precondition,
    canonical_condition,
)

if TYPE_CHECKING:
    from lark.tree import Meta

    from e_planner.core import Condition, Proposition


@dataclass(frozen=True, slots=True)
class SourceSpan:
    """1-based position and character length of a piece of source text."""

    line: int
    column: int
    length: int = 1

    def __post_init__(self) -> None:
        if self.line < 1 or self.column < 1:
            msg = f"invalid source span {self.line}:{self.column}"
            raise ValueError(msg)


@dataclass(frozen=True, slots=True)
class FluentDecl:
    names: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class ActionDecl:
    names: tuple[str, ...]


@dataclass(frozen=True, slots=True)
class HorizonDecl:
    value: int


@dataclass(frozen=True, slots=True)
class GoalDecl:
    goal: tuple[HoldsAt, ...]


type Payload = FluentDecl | ActionDecl | HorizonDecl | GoalDecl | Proposition


@dataclass(frozen=True, slots=True)
class Statement:
    payload: Payload
    span: SourceSpan


def span_of(meta: Meta) -> SourceSpan:
    if getattr(meta, "empty", True):
        return SourceSpan(1, 1, 0)
    return SourceSpan(meta.line, meta.column, max(meta.end_pos - meta.start_pos, 1))


class ProblemTransformer(Transformer[Token, Any]):
    """Turn a parse tree into `Statement`s (problem) or a set of t-propositions (query)."""

    def problem(self, items: list[Statement]) -> list[Statement]:
        return list(items)

    def query(self, items: list[HoldsAt]) -> frozenset[HoldsAt]:
        return frozenset(items)

    def plan(self, items: list[HappensAt]) -> frozenset[HappensAt]:
        return frozenset(items)

    def event(self, items: list[Token]) -> HappensAt:
        return HappensAt(str(items[0]), int(items[1]))

    def name_list(self, items: list[Token]) -> tuple[str, ...]:
        return tuple(str(tok) for tok in items)

    def literal(self, items: list[Token]) -> FluentLiteral:
        return FluentLiteral(str(items[-1]), positive=len(items) == 1)

    def condition(self, items: list[FluentLiteral | None]) -> Condition:
        return canonical_condition(lit for lit in items if lit is not None)

    def tprop(self, items: list[Any]) -> HoldsAt:
        lit, time = items
        return HoldsAt(lit, int(time))

    def effect(self, items: list[Token]) -> Effect:
        return Effect(str(items[0]))

    @v_args(meta=True)
    def fluent_decl(self, meta: Meta, items: list[tuple[str, ...]]) -> Statement:
        return Statement(FluentDecl(items[0]), span_of(meta))

    @v_args(meta=True)
    def action_decl(self, meta: Meta, items: list[tuple[str, ...]]) -> Statement:
        return Statement(ActionDecl(items[0]), span_of(meta))

    @v_args(meta=True)
    def horizon_decl(self, meta: Meta, items: list[Token]) -> Statement:
        return Statement(HorizonDecl(int(items[0])), span_of(meta))

    @v_args(meta=True)
    def goal_decl(self, meta: Meta, items: list[HoldsAt]) -> Statement:
        return Statement(GoalDecl(tuple(items)), span_of(meta))

    @v_args(meta=True)
    def causal_law(self, meta: Meta, items: list[Any]) -> Statement:
        action, effect, fluent, cond = items
        law = CausalLaw(str(action), effect, str(fluent), cond or ())
        return Statement(law, span_of(meta))

    @v_args(meta=True)
    def occurrence(self, meta: Meta, items: list[Token]) -> Statement:
        return Statement(HappensAt(str(items[0]), int(items[1])), span_of(meta))

    @v_args(meta=True)
    def observation(self, meta: Meta, items: list[HoldsAt]) -> Statement:
        return Statement(items[0], span_of(meta))

    @v_args(meta=True)
    def constraint(self, meta: Meta, items: list[Any]) -> Statement:
        return Statement(Constraint(items[0], items[1]), span_of(meta))

    @v_args(meta=True)
    def precondition(self, meta: Meta, items: list[Any]) -> Statement:
        return Statement(Precondition(str(items[0]), items[1]), span_of(meta))
