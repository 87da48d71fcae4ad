"""TOML configuration handling for engine limits."""

from __future__ import annotations

import tomllib
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import TYPE_CHECKING

import tomli_w

from .error import ValidationError

if TYPE_CHECKING:
    from typing import Any

CONFIG_FILE = "eplan.toml"


@dataclass(frozen=True, slots=True)
class EngineConfig:
    """Limits and switches shared by the oracle, the argumentation engine and the planner."""

    max_fluents: int = 16
    node_budget: int = 200_000
    max_plan_rounds: int = 8
    abduction_depth: int = 3
    minimize_plan: bool = False

    def override(self, **values: Any) -> EngineConfig:  # noqa: ANN401
        """Return a copy with every non-None value applied."""
        return replace(self, **{k: v for k, v in values.items() if v is not None})


def _check_engine_table(table: dict[str, Any], source: Path) -> dict[str, Any]:
    """Validate keys and value types of the `[engine]` table.

    Raises:
        ValidationError: On unknown keys or wrongly typed values
    """
    known = {f.name: f for f in fields(EngineConfig)}
    defaults = EngineConfig()
    for key, value in table.items():
        if key not in known:
            msg = (
                f"unknown key in [path]{source}[/]: [var]engine.{key}[/]\n\n"
                f"[tip]tip:[/] valid keys are {', '.join(sorted(known))}"
            )
            raise ValidationError(msg)
        expected = type(getattr(defaults, key))
        if type(value) is not expected:
            msg = f"[var]engine.{key}[/] in [path]{source}[/] must be of type {expected.__name__}"
            raise ValidationError(msg)
        if expected is int and value < 0:
            msg = f"[var]engine.{key}[/] in [path]{source}[/] must be non-negative"
            raise ValidationError(msg)
    return table


def load_config(path: Path | None = None) -> EngineConfig:
    """Load engine configuration.

    Args:
        path: Explicit config file; when None, `eplan.toml` in cwd is used if present

    Returns:
        EngineConfig: Defaults overridden by the file's `[engine]` table

    Raises:
        ValidationError: If an explicit file is missing or the TOML is invalid
    """
    explicit = path is not None
    toml_path = path if path is not None else Path.cwd() / CONFIG_FILE

    if not toml_path.is_file():
        if explicit:
            msg = f"config file not found: [path]{toml_path}[/]"
            raise ValidationError(msg)
        return EngineConfig()

    try:
        with toml_path.open("rb") as f:
            data = tomllib.load(f)
    except tomllib.TOMLDecodeError as e:
        msg = (
            f"invalid configuration: [path]{toml_path}[/]\n  {e}\n\n"
            "[tip]tip:[/] check TOML syntax or regenerate with [var]eplan config --write[/]"
        )
        raise ValidationError(msg) from e

    table = data.get("engine", {})
    if not isinstance(table, dict):
        msg = f"[var]engine[/] in [path]{toml_path}[/] must be a table"
        raise ValidationError(msg)
    return EngineConfig(**_check_engine_table(table, toml_path))


def config_to_toml(config: EngineConfig) -> str:
    return tomli_w.dumps({"engine": asdict(config)})


def write_config(path: Path, config: EngineConfig) -> None:
    """Write configuration to `path`.

    Raises:
        ValidationError: If the file already exists
    """
    if path.exists():
        msg = f"cannot write configuration: [path]{path}[/] already exists"
        raise ValidationError(msg)
    with path.open("wb") as f:
        tomli_w.dump({"engine": asdict(config)}, f)
