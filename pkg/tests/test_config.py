"""Tests for config module functions."""

from pathlib import Path

import pytest

from asrefine.config import (
    DEFAULT_MAX_DEPTH,
    MAX_DEPTH_LIMIT,
    RunConfig,
    get_config_dir,
    load_settings,
)
from asrefine.exceptions import ConfigurationError

ENV_KEYS = (
    "ASREFINE_MAX_DEPTH",
    "ASREFINE_NODE_BUDGET",
    "ASREFINE_EXPLICIT_BUDGET",
    "ASREFINE_JOBS",
    "ASREFINE_SOLVE_TIMEOUT",
    "ASREFINE_MUTANT_TIMEOUT",
)


@pytest.fixture
def clean_env(monkeypatch):
    # set first so teardown also removes values a .env file loaded
    for key in ENV_KEYS:
        monkeypatch.setenv(key, "")
        monkeypatch.delenv(key)
    return monkeypatch


class TestRunConfig:
    """Tests for RunConfig validation and overrides."""

    def test_defaults(self):
        config = RunConfig().validate()
        assert config.max_depth == 20
        assert config.node_budget == 1_000_000
        assert config.engine == "symbolic"

    @pytest.mark.parametrize(
        "field,value",
        [
            ("max_depth", -1),
            ("node_budget", 0),
            ("solve_timeout", 0.0),
            ("mutant_timeout", -5.0),
            ("explicit_budget", 0),
            ("engine", "bdd"),
            ("jobs", 0),
        ],
    )
    def test_invalid_values(self, field, value):
        with pytest.raises(ConfigurationError, match=field.split("_")[0]):
            RunConfig(**{field: value}).validate()

    def test_zero_depth_allowed(self):
        assert RunConfig(max_depth=0).validate().max_depth == 0

    def test_overrides_skip_none(self):
        config = RunConfig().with_overrides(max_depth=None, engine="both", jobs=4)
        assert config.max_depth == DEFAULT_MAX_DEPTH
        assert config.engine == "both"
        assert config.jobs == 4

    def test_overrides_validate(self):
        with pytest.raises(ConfigurationError):
            RunConfig().with_overrides(node_budget=-3)

    def test_to_dict_omits_jobs(self):
        data = RunConfig(jobs=8).to_dict()
        assert "jobs" not in data
        assert data["explicit_budget"] == 1_000_000


class TestLoadSettings:
    """Tests for load_settings."""

    def test_environment_values(self, clean_env, tmp_path):
        clean_env.setenv("ASREFINE_MAX_DEPTH", "7")
        clean_env.setenv("ASREFINE_NODE_BUDGET", "500")
        clean_env.setenv("ASREFINE_SOLVE_TIMEOUT", "2.5")
        clean_env.setenv("ASREFINE_JOBS", "3")
        config = load_settings(tmp_path)
        assert config.max_depth == 7
        assert config.node_budget == 500
        assert config.solve_timeout == 2.5
        assert config.jobs == 3

    def test_depth_clamped(self, clean_env, tmp_path):
        clean_env.setenv("ASREFINE_MAX_DEPTH", "999999")
        assert load_settings(tmp_path).max_depth == MAX_DEPTH_LIMIT

    def test_env_file(self, clean_env, tmp_path):
        (tmp_path / ".env").write_text(
            '# limits\nASREFINE_MAX_DEPTH="12"\nnot a setting\nASREFINE_NODE_BUDGET = 64\n',
            encoding="utf-8",
        )
        config = load_settings(tmp_path)
        assert config.max_depth == 12
        assert config.node_budget == 64

    def test_environment_wins_over_env_file(self, clean_env, tmp_path):
        (tmp_path / ".env").write_text("ASREFINE_MAX_DEPTH=12\n", encoding="utf-8")
        clean_env.setenv("ASREFINE_MAX_DEPTH", "5")
        assert load_settings(tmp_path).max_depth == 5

    @pytest.mark.parametrize(
        "key,value",
        [
            ("ASREFINE_MAX_DEPTH", "deep"),
            ("ASREFINE_NODE_BUDGET", "-1"),
            ("ASREFINE_SOLVE_TIMEOUT", "0"),
        ],
    )
    def test_malformed_values(self, clean_env, tmp_path, key, value):
        clean_env.setenv(key, value)
        with pytest.raises(ConfigurationError, match=key):
            load_settings(tmp_path)


class TestGetConfigDir:
    """Tests for get_config_dir."""

    def test_override(self, tmp_path):
        assert get_config_dir(tmp_path) == tmp_path.resolve()

    def test_cwd_with_env_file(self, tmp_path, monkeypatch):
        (tmp_path / ".env").write_text("", encoding="utf-8")
        monkeypatch.chdir(tmp_path)
        assert get_config_dir() == Path.cwd()

    def test_platform_default(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        assert get_config_dir().name == "asrefine"
