from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING

import pytest

from e_planner.parse import parse_file

if TYPE_CHECKING:
    from collections.abc import Callable

    from e_planner.core import PlanningProblem

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def load() -> Callable[..., PlanningProblem]:
    """Load `fixtures/<name>.e`, optionally overriding the horizon."""

    def _load(name: str, *, horizon: int | None = None) -> PlanningProblem:
        return parse_file(FIXTURES / f"{name}.e", horizon=horizon)

    return _load
