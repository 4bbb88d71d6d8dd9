"""Tests for session start-up through the apsbits config and logging loaders."""

import pytest

from bess_bench.startup import default_iconfig_path
from bess_bench.startup import extra_logging_configs_path
from bess_bench.startup import init_session
from bess_bench.utils.config_loaders import ConfigError


def test_packaged_session_config():
    iconfig = init_session()
    assert "EXPERIMENT" in iconfig
    assert iconfig["SOLVER"]["RHO_EQ_SCALE"] > 0


def test_explicit_paths(tmp_path):
    path = tmp_path / "iconfig.yml"
    path.write_text("ICONFIG_VERSION: 1.0.0\nEXPERIMENT:\n    SEED: 11\n")
    iconfig = init_session(path, extra_logging_configs_path)
    assert iconfig["EXPERIMENT"]["SEED"] == 11


def test_missing_iconfig(tmp_path):
    with pytest.raises(ConfigError):
        init_session(tmp_path / "absent.yml")


def test_missing_logging_config(tmp_path):
    with pytest.raises(ConfigError):
        init_session(default_iconfig_path, tmp_path / "absent.yml")


def test_iconfig_must_be_a_mapping(tmp_path):
    path = tmp_path / "iconfig.yml"
    path.write_text("- just\n- a list\n")
    with pytest.raises(ConfigError):
        init_session(path)
