"""dump -- Print the grounded argumentation program of a domain."""

from __future__ import annotations

from typing import TYPE_CHECKING, override

from e_planner.argumentation import dump, translate
from e_planner.commands.base import BaseCommand, add_file_arg, load_problem
from e_planner.common.display import cout

if TYPE_CHECKING:
    from argparse import ArgumentParser, Namespace


class DumpCommand(BaseCommand):
    """Background facts and rules, then argument rules in `PG[f,t2;t1]` notation."""

    name = "dump"
    help = "Dump the argumentation program."

    @override
    def configure_parser(self, parser: ArgumentParser) -> None:
        add_file_arg(parser)
        parser.add_argument(
            "--all",
            action="store_true",
            help="Include persistence rules (default: base rules only)",
        )

    @override
    def execute(self, args: Namespace) -> int:
        program = translate(load_problem(args))
        for line in dump(program, include_theory=args.all).splitlines():
            cout.plain(line)
        return 0
