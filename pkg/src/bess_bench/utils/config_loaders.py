"""
YAML helpers for the packaged data files.

The session iconfig itself is loaded by ``apsbits.utils.config_loaders``
(see :mod:`bess_bench.startup`); these helpers read the other YAML inputs
(TEP dataset, BESS parameter files) with uniform errors.

.. autosummary::
    ~load_yaml
    ~resolve_config_path
"""

from pathlib import Path

import yaml

CONFIGS_PATH = Path(__file__).parent.parent / "configs"
DEFAULT_ICONFIG = CONFIGS_PATH / "iconfig.yml"


class ConfigError(ValueError):
    """Configuration file missing, malformed or inconsistent."""


def load_yaml(path) -> dict:
    """Read one YAML mapping from ``path``."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Configuration file not found: {path}")
    try:
        with open(path) as f:
            content = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigError(f"Malformed YAML in {path}: {e}") from e
    if content is None:
        return {}
    if not isinstance(content, dict):
        raise ConfigError(f"Expected a mapping at top level of {path}")
    return content


def resolve_config_path(name) -> Path:
    """Resolve ``name`` relative to the packaged configs directory when not absolute."""
    path = Path(name)
    if path.is_absolute() or path.exists():
        return path
    return CONFIGS_PATH / path
