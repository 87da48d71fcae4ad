from __future__ import annotations

from abc import ABC, abstractmethod
from pathlib import Path
from typing import TYPE_CHECKING, ClassVar

from e_planner.common.config import load_config
from e_planner.parse import parse_file

if TYPE_CHECKING:
    from argparse import ArgumentParser, Namespace

    from e_planner.common.config import EngineConfig
    from e_planner.core import PlanningProblem


class BaseCommand(ABC):
    """ABC defining the interface for eplan commands.

    Commands must implement this to be registered with the CLI.

    Attributes:
        name: The name of the command
        help: Help text for the command
        aliases: Optional tuple of alias names
    """

    __slots__ = ()

    name: ClassVar[str]
    help: ClassVar[str]
    aliases: ClassVar[tuple[str, ...] | None] = None
    has_pos_args: ClassVar[bool] = True

    @abstractmethod
    def configure_parser(self, parser: ArgumentParser) -> None:
        """Configure the argument parser for this command.

        Args:
            parser: ArgumentParser instance to configure with command-specific arguments
        """
        ...

    @abstractmethod
    def execute(self, args: Namespace) -> int:
        """Execute (run) the command.

        Args:
            args: Parsed command-line arguments

        Returns:
            int: Exit status (0 affirmative, 1 negative)

        Raises:
            EPlannerError: If the command fails
        """
        ...


def add_file_arg(parser: ArgumentParser) -> None:
    parser.add_argument("file", type=Path, metavar="FILE", help="Problem file ([italic].e[/])")


def engine_config(args: Namespace) -> EngineConfig:
    """Configuration file values overridden by command-line flags."""
    return load_config(args.config).override(
        max_fluents=args.max_fluents,
        minimize_plan=getattr(args, "minimize", None) or None,
    )


def load_problem(args: Namespace) -> PlanningProblem:
    return parse_file(args.file, horizon=args.horizon)
