"""Logging setup: module loggers under one namespace, rendered by rich."""

from __future__ import annotations

import logging

from rich.logging import RichHandler

from .display import cerr

_ROOT = "e_planner"


def get_log(name: str) -> logging.Logger:
    return logging.getLogger(f"{_ROOT}.{name}")


def setup_logging(verbosity: int = 0) -> None:
    """Attach a rich handler to the package logger.

    Args:
        verbosity: 0 for warnings only, 1 for info, 2+ for debug
    """
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    root = logging.getLogger(_ROOT)
    root.setLevel(level)
    if not any(isinstance(h, RichHandler) for h in root.handlers):
        root.addHandler(RichHandler(console=cerr, show_path=False, markup=False))
    root.propagate = False
