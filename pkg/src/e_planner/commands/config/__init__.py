"""config -- Show or write the engine configuration."""

from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING, override

from e_planner.commands.base import BaseCommand, engine_config
from e_planner.common.config import CONFIG_FILE, config_to_toml, write_config
from e_planner.common.display import cout

if TYPE_CHECKING:
    from argparse import ArgumentParser, Namespace


class ConfigCommand(BaseCommand):
    """Print the effective configuration, or write it as TOML."""

    name = "config"
    help = "Show or write the engine configuration."
    has_pos_args = False

    @override
    def configure_parser(self, parser: ArgumentParser) -> None:
        parser.add_argument(
            "--write",
            nargs="?",
            type=Path,
            const=Path(CONFIG_FILE),
            default=None,
            metavar="PATH",
            help=f"Write to [italic]PATH[/] (default: [cyan]{CONFIG_FILE}[/]); never overwrites",
        )

    @override
    def execute(self, args: Namespace) -> int:
        config = engine_config(args)
        if args.write is None:
            for line in config_to_toml(config).splitlines():
                cout.plain(line)
            return 0
        write_config(args.write, config)
        cout.note(f"[success]wrote[/] [path]{args.write}[/]")
        return 0
