"""models -- Print every model of a domain as a fluent x time table."""

from __future__ import annotations

from typing import TYPE_CHECKING, override

from e_planner.commands.base import BaseCommand, add_file_arg, engine_config, load_problem
from e_planner.common.display import cout
from e_planner.models import models, naive_models

if TYPE_CHECKING:
    from argparse import ArgumentParser, Namespace


class ModelsCommand(BaseCommand):
    """Enumerate models (forward simulation, or brute force with `--naive`)."""

    name = "models"
    help = "List models as fluent x time tables."
    aliases = ("m",)

    @override
    def configure_parser(self, parser: ArgumentParser) -> None:
        add_file_arg(parser)
        parser.add_argument(
            "--naive",
            action="store_true",
            help="Check every assignment literally (tiny problems only)",
        )

    @override
    def execute(self, args: Namespace) -> int:
        problem = load_problem(args)
        found = naive_models(problem) if args.naive else models(problem, max_fluents=engine_config(args).max_fluents)
        for i, m in enumerate(found):
            cout.note(f"[verdict]model {i + 1}[/]")
            for line in m.render().splitlines():
                cout.plain(line)
            cout.plain("")
        cout.plain(f"models: {len(found)}")
        return 0 if found else 1
