"""Parsing and serialization of the Language E problem DSL."""

from __future__ import annotations

from functools import cache
from typing import TYPE_CHECKING

from lark import Lark, UnexpectedCharacters, UnexpectedInput, UnexpectedToken

from e_planner.common.error import DslParseError
from e_planner.common.log import get_log
from e_planner.common.validation import read_text
from e_planner.core import HappensAt, HoldsAt, PlanningProblem, validate, validate_query

from .grammar import GRAMMAR
from .render import render_problem, render_query
from .transformer import ActionDecl, FluentDecl, GoalDecl, HorizonDecl, ProblemTransformer, SourceSpan, Statement

if TYPE_CHECKING:
    from pathlib import Path

    from e_planner.core import DomainProposition, Precondition, Proposition

__all__ = [
    "SourceSpan",
    "parse_file",
    "parse_plan",
    "parse_problem",
    "parse_query",
    "render_problem",
    "render_query",
]


@cache
def _parser() -> Lark:
    return Lark(GRAMMAR, parser="lalr", start=["problem", "query", "plan"], propagate_positions=True)


def _clamp_span(text: str, line: int, column: int, length: int) -> SourceSpan:
    """Keep an error span inside the input (lark reports end-of-input past the last char)."""
    lines = text.splitlines() or [""]
    if line < 1 or line > len(lines):
        line, column = len(lines), len(lines[-1]) + 1
    column = max(column, 1)
    return SourceSpan(line, column, max(length, 0))


def _syntax_error(text: str, e: UnexpectedInput) -> DslParseError:
    match e:
        case UnexpectedToken(token=tok):
            found = "end of input" if tok.type == "$END" else f"`{tok}`"
            expected = ", ".join(sorted(e.expected))
            msg = f"unexpected {found}; expected one of: {expected}"
            span = _clamp_span(text, e.line, e.column, len(tok))
        case UnexpectedCharacters():
            msg = f"unexpected character `{text[e.pos_in_stream]}`"
            span = _clamp_span(text, e.line, e.column, 1)
        case _:
            msg = "unexpected end of input"
            span = _clamp_span(text, -1, -1, 0)
    return DslParseError(msg, span)


def _run(text: str, start: str) -> object:
    try:
        tree = _parser().parse(text, start=start)
    except UnexpectedInput as e:
        raise _syntax_error(text, e) from e
    return ProblemTransformer().transform(tree)


def parse_problem(text: str, *, horizon: int | None = None, name: str = "") -> PlanningProblem:
    """Parse a problem file.

    Args:
        text: DSL source
        horizon: Override for (or substitute of) the file's `horizon` statement
        name: Label kept on the problem (not part of equality)

    Returns:
        PlanningProblem: Validated problem

    Raises:
        DslParseError: On syntax errors and on well-formedness diagnostics
    """
    statements: list[Statement] = _run(text, "problem")  # type: ignore[assignment]

    fluents: set[str] = set()
    actions: set[str] = set()
    domain: set[DomainProposition] = set()
    preconditions: set[Precondition] = set()
    goal: set[HoldsAt] = set()
    spans: dict[Proposition, SourceSpan] = {}
    declared_horizon: tuple[int, SourceSpan] | None = None

    for stmt in statements:
        match stmt.payload:
            case FluentDecl(names=names):
                fluents.update(names)
            case ActionDecl(names=names):
                actions.update(names)
            case HorizonDecl(value=value):
                if declared_horizon is not None and declared_horizon[0] != value:
                    msg = f"horizon already declared as {declared_horizon[0]}"
                    raise DslParseError(msg, stmt.span)
                declared_horizon = (value, stmt.span)
            case GoalDecl(goal=items):
                goal.update(items)
                for g in items:
                    spans.setdefault(g, stmt.span)
            case prop if prop.kind == "p":
                preconditions.add(prop)  # type: ignore[arg-type]
                spans.setdefault(prop, stmt.span)
            case prop:
                domain.add(prop)  # type: ignore[arg-type]
                spans.setdefault(prop, stmt.span)

    if horizon is None:
        if declared_horizon is None:
            raise DslParseError("missing `horizon` statement", _clamp_span(text, -1, -1, 0))
        horizon = declared_horizon[0]

    problem = PlanningProblem(
        fluents=frozenset(fluents),
        actions=frozenset(actions),
        horizon=horizon,
        domain=frozenset(domain),
        preconditions=frozenset(preconditions),
        goal=frozenset(goal),
        name=name,
    )

    if diagnostics := validate(problem):
        first = diagnostics[0]
        span = spans.get(first.proposition) if first.proposition is not None else None
        if span is None:
            span = declared_horizon[1] if declared_horizon is not None else SourceSpan(1, 1, 0)
        get_log("parse").debug("%d diagnostic(s) in %s", len(diagnostics), name or "<input>")
        raise DslParseError(str(first), span, tuple(diagnostics))

    return problem


def parse_query(text: str, *, problem: PlanningProblem | None = None) -> frozenset[HoldsAt]:
    """Parse a comma-separated list of `literal holds-at nat`.

    With `problem`, every literal must name one of its fluents at a time within its horizon.

    Raises:
        DslParseError: On an empty query, syntax errors or a query the problem cannot answer
    """
    if not text.strip():
        raise DslParseError("empty query", SourceSpan(1, 1, 0))
    query: frozenset[HoldsAt] = _run(text, "query")  # type: ignore[assignment]
    if problem is not None and (diagnostics := validate_query(problem, query)):
        raise DslParseError(str(diagnostics[0]), SourceSpan(1, 1, len(text)), tuple(diagnostics))
    return query


def parse_file(path: Path, *, horizon: int | None = None) -> PlanningProblem:
    """Read and parse a problem file.

    Raises:
        ValidationError: If the file does not exist
        DslParseError: If parsing fails
    """
    return parse_problem(read_text(path, "problem file"), horizon=horizon, name=path.stem)


def parse_plan(text: str) -> frozenset[HappensAt]:
    """Parse a plan: `A happens-at T` or `A @ T` items, separated by commas or newlines.

    Raises:
        DslParseError: On syntax errors
    """
    return _run(text, "plan")  # type: ignore[return-value]
