from __future__ import annotations

import tomllib

import pytest

from e_planner.common.config import EngineConfig, config_to_toml, load_config, write_config
from e_planner.common.error import ValidationError


def test_defaults_without_file(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    assert load_config() == EngineConfig()


def test_cwd_file_is_picked_up(monkeypatch, tmp_path):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "eplan.toml").write_text("[engine]\nnode_budget = 500\nminimize_plan = true\n")
    assert load_config() == EngineConfig(node_budget=500, minimize_plan=True)


def test_explicit_missing_file(tmp_path):
    with pytest.raises(ValidationError, match="not found"):
        load_config(tmp_path / "missing.toml")


@pytest.mark.parametrize(
    ("body", "match"),
    [
        ("[engine]\nmax_fluent = 3\n", "unknown key"),
        ('[engine]\nmax_fluents = "3"\n', "must be of type int"),
        ("[engine]\nminimize_plan = 1\n", "must be of type bool"),
        ("[engine]\nabduction_depth = -1\n", "non-negative"),
        ("engine = 3\n", "must be a table"),
        ("[engine\n", "invalid configuration"),
    ],
)
def test_rejects_bad_files(tmp_path, body, match):
    path = tmp_path / "eplan.toml"
    path.write_text(body)
    with pytest.raises(ValidationError, match=match):
        load_config(path)


def test_override_skips_none():
    config = EngineConfig().override(max_fluents=None, node_budget=10)
    assert config.max_fluents == 16
    assert config.node_budget == 10


def test_write_and_reload(tmp_path):
    path = tmp_path / "eplan.toml"
    config = EngineConfig(max_plan_rounds=3)
    write_config(path, config)
    assert load_config(path) == config
    with pytest.raises(ValidationError, match="already exists"):
        write_config(path, config)


def test_toml_shape():
    assert tomllib.loads(config_to_toml(EngineConfig()))["engine"]["abduction_depth"] == 3
