from __future__ import annotations

from typing import TYPE_CHECKING, Final

from .check import CheckCommand
from .config import ConfigCommand
from .dump import DumpCommand
from .entails import EntailsCommand
from .models import ModelsCommand
from .plan import PlanCommand
from .validate import ValidateCommand

if TYPE_CHECKING:
    from .base import BaseCommand


COMMANDS: Final[list[type[BaseCommand]]] = [
    CheckCommand,
    EntailsCommand,
    PlanCommand,
    ValidateCommand,
    ModelsCommand,
    DumpCommand,
    ConfigCommand,
]

__all__ = ["COMMANDS"]
