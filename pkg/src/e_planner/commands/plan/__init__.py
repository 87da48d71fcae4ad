"""plan -- Find a safe (or weak) plan for the goal of a problem."""

from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING, get_args, override

from e_planner.commands.base import BaseCommand, add_file_arg, engine_config, load_problem
from e_planner.common.display import cout
from e_planner.common.error import NoPlanError
from e_planner.common.types import PlanMode
from e_planner.derivation import Trace
from e_planner.parse import parse_query
from e_planner.planner import PlanKind, Planner, format_plan

if TYPE_CHECKING:
    from argparse import ArgumentParser, Namespace

    from e_planner.planner import PlanOutcome


class PlanCommand(BaseCommand):
    """Run the planner and cross-check its answer with the model oracle."""

    name = "plan"
    help = "Plan for the problem's goal."
    aliases = ("p",)

    @override
    def configure_parser(self, parser: ArgumentParser) -> None:
        add_file_arg(parser)
        parser.add_argument("--goal", default=None, metavar="GOAL", help="Goal override (t-propositions)")
        parser.add_argument(
            "--mode",
            choices=get_args(PlanMode.__value__),
            default="safe",
            help="Plan kind to look for (default: [cyan]safe[/])",
        )
        parser.add_argument("--trace", type=Path, default=None, metavar="PATH", help="Write a derivation transcript")
        parser.add_argument(
            "--minimize",
            action="store_true",
            help="Drop actions while the plan stays safe",
        )

    @override
    def execute(self, args: Namespace) -> int:
        config = engine_config(args)
        problem = load_problem(args)
        if args.goal is not None:
            problem = problem.with_goal(parse_query(args.goal, problem=problem))

        mode: PlanMode = args.mode
        trace = Trace() if args.trace is not None else None
        try:
            planner = Planner(problem, config, trace=trace)
            outcome: PlanOutcome
            if mode == "safe":
                outcome = planner.plan_and_verify().outcome
            else:
                outcome = planner.verify(planner.weak_plan()).outcome
        except NoPlanError as e:
            cout.note(f"[note]note:[/] {e}")
            cout.plain("NO-PLAN")
            return 1
        finally:
            if trace is not None:
                trace.write(args.trace)

        for line in format_plan(outcome).splitlines():
            cout.plain(line)
        return 0 if outcome.kind is PlanKind.SAFE or mode == "weak" else 1
