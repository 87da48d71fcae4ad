"""validate -- Classify a given plan as safe, weak or not a plan."""

from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING, override

from e_planner.commands.base import BaseCommand, add_file_arg, engine_config, load_problem
from e_planner.common.display import cout
from e_planner.common.error import ValidationError
from e_planner.common.validation import read_text
from e_planner.models import PlanVerdict, classify_plan
from e_planner.parse import parse_plan, parse_query

if TYPE_CHECKING:
    from argparse import ArgumentParser, Namespace

    from e_planner.core import HappensAt, PlanningProblem


def read_plan(source: str) -> frozenset[HappensAt]:
    """A plan from a file path, or inline text such as `"TurnOn @ 3, Fill @ 1"`."""
    path = Path(source)
    text = read_text(path, "plan file") if path.suffix and path.exists() else source
    return parse_plan(text)


def check_plan(problem: PlanningProblem, plan: frozenset[HappensAt]) -> None:
    """Plan actions must be declared and happen within the horizon.

    Raises:
        ValidationError: If an action is undeclared or a time is out of range
    """
    for h in sorted(plan):
        if h.action not in problem.actions:
            msg = (
                f"plan action [var]{h.action}[/] is not declared\n\n"
                f"[tip]tip:[/] declared actions: {', '.join(sorted(problem.actions)) or '(none)'}"
            )
            raise ValidationError(msg)
        if not 0 <= h.time <= problem.horizon:
            msg = f"plan time [value]{h.time}[/] for [var]{h.action}[/] is outside [0, {problem.horizon}]"
            raise ValidationError(msg)


class ValidateCommand(BaseCommand):
    """Oracle classification of a supplied plan; exits 0 only for SAFE."""

    name = "validate"
    help = "Classify a plan (SAFE / WEAK / NOT-A-PLAN)."
    aliases = ("v",)

    @override
    def configure_parser(self, parser: ArgumentParser) -> None:
        add_file_arg(parser)
        parser.add_argument(
            "--plan",
            required=True,
            metavar="PLAN",
            help='Plan file or inline plan, e.g. [cyan]"TurnOn @ 3, Fill @ 1"[/]',
        )
        parser.add_argument("--goal", default=None, metavar="GOAL", help="Goal override (t-propositions)")

    @override
    def execute(self, args: Namespace) -> int:
        problem = load_problem(args)
        if args.goal is not None:
            problem = problem.with_goal(parse_query(args.goal, problem=problem))
        plan = read_plan(args.plan)
        check_plan(problem, plan)

        verdict = classify_plan(problem, plan, max_fluents=engine_config(args).max_fluents)
        cout.plain(str(verdict.tag))
        for a in sorted(verdict.assumptions, key=lambda h: (h.time, h.literal)):
            cout.plain(f"ASSUMES {a.literal} @ {a.time}")
        return 0 if verdict.tag is PlanVerdict.SAFE else 1
