from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from collections.abc import Iterable

    from e_planner.core import HoldsAt, PlanningProblem


def render_query(query: Iterable[HoldsAt]) -> str:
    return ", ".join(str(q) for q in sorted(query))


def render_problem(p: PlanningProblem) -> str:
    """Serialize a problem in canonical statement order.

    Declarations come first, then c/h/t/r/p-propositions, then the goal.
    `parse_problem(render_problem(p)) == p` for every valid problem.
    """
    lines: list[str] = []
    if p.fluents:
        lines.append(f"fluent {', '.join(sorted(p.fluents))}.")
    if p.actions:
        lines.append(f"action {', '.join(sorted(p.actions))}.")
    lines.append(f"horizon {p.horizon}.")
    lines.extend(f"{prop}." for prop in p.propositions)
    if p.goal:
        lines.append(f"goal {render_query(p.goal)}.")
    return "\n".join(lines) + "\n"
