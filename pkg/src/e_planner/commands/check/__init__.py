"""check -- Count the models of a domain and report consistency."""

from __future__ import annotations

from typing import TYPE_CHECKING, override

from e_planner.commands.base import BaseCommand, add_file_arg, engine_config, load_problem
from e_planner.common.display import cout
from e_planner.models import models

if TYPE_CHECKING:
    from argparse import ArgumentParser, Namespace


class CheckCommand(BaseCommand):
    """Report the number of models; consistent iff at least one."""

    name = "check"
    help = "Check consistency (model count)."
    aliases = ("c",)

    @override
    def configure_parser(self, parser: ArgumentParser) -> None:
        add_file_arg(parser)

    @override
    def execute(self, args: Namespace) -> int:
        config = engine_config(args)
        found = models(load_problem(args), max_fluents=config.max_fluents)
        cout.plain(f"models: {len(found)}")
        return 0 if found else 1
