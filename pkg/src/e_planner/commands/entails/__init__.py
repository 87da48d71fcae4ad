"""entails -- Decide whether a domain entails a query."""

from __future__ import annotations

from typing import TYPE_CHECKING, get_args, override

from e_planner.argumentation import maximal_admissible, translate
from e_planner.commands.base import BaseCommand, add_file_arg, engine_config, load_problem
from e_planner.common.display import cout
from e_planner.common.error import EngineMismatchError
from e_planner.common.log import get_log
from e_planner.common.types import Engine
from e_planner.models import entails
from e_planner.parse import parse_query

if TYPE_CHECKING:
    from argparse import ArgumentParser, Namespace

    from e_planner.common.config import EngineConfig
    from e_planner.core import HoldsAt, PlanningProblem

log = get_log("commands.entails")


def sceptically_entails(problem: PlanningProblem, query: frozenset[HoldsAt], config: EngineConfig) -> bool:
    """Every confirming maximal admissible set derives every literal of `query`."""
    extensions = maximal_admissible(translate(problem), max_fluents=config.max_fluents)
    return all(ext.holds(q) for ext in extensions for q in query)


class EntailsCommand(BaseCommand):
    """Entailment by the model oracle, by sceptical argumentation, or both (cross-checked)."""

    name = "entails"
    help = "Check whether a query is entailed."
    aliases = ("e",)

    @override
    def configure_parser(self, parser: ArgumentParser) -> None:
        add_file_arg(parser)
        parser.add_argument("query", metavar="QUERY", help='t-propositions, e.g. [cyan]"Running holds-at 7"[/]')
        parser.add_argument(
            "--engine",
            choices=get_args(Engine.__value__),
            default="both",
            help="Engine to decide with (default: [cyan]both[/])",
        )

    @override
    def execute(self, args: Namespace) -> int:
        config = engine_config(args)
        problem = load_problem(args)
        query = parse_query(args.query, problem=problem)

        engine: Engine = args.engine
        verdicts: dict[str, bool] = {}
        if engine in {"oracle", "both"}:
            verdicts["oracle"] = entails(problem, query, max_fluents=config.max_fluents)
        if engine in {"argumentation", "both"}:
            verdicts["argumentation"] = sceptically_entails(problem, query, config)
        log.info("verdicts: %s", verdicts)

        if len(set(verdicts.values())) > 1:
            msg = (
                f"engines disagree on [var]{args.query}[/]: oracle says {verdicts['oracle']}, "
                f"argumentation says {verdicts['argumentation']}"
            )
            raise EngineMismatchError(msg)

        entailed = next(iter(verdicts.values()))
        cout.plain("entailed" if entailed else "not entailed")
        return 0 if entailed else 1
