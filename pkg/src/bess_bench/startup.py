"""
Start bess_bench sessions of all kinds.

Includes:

* Python script
* IPython console
* command-line runs (``bess-bench``)
"""

import logging
from pathlib import Path

from apsbits.utils.config_loaders import load_config
from apsbits.utils.logging_setup import configure_logging

from .utils.config_loaders import load_yaml

logger = logging.getLogger(__name__)

package_path = Path(__file__).parent
default_iconfig_path = package_path / "configs" / "iconfig.yml"
extra_logging_configs_path = package_path / "configs" / "extra_logging.yml"


def init_session(iconfig_path=None, logging_path=None):
    """
    Load the iconfig and configure logging for one session.

    Parameters:
    -----------
    iconfig_path : str or Path, optional
        iconfig YAML, defaults to the packaged ``configs/iconfig.yml``
    logging_path : str or Path, optional
        Logging YAML, defaults to the packaged ``configs/extra_logging.yml``

    Returns:
    --------
    dict
        The active iconfig

    Raises ConfigError when either file is missing or is not a YAML mapping.
    """
    iconfig_path = Path(iconfig_path) if iconfig_path else default_iconfig_path
    logging_path = Path(logging_path) if logging_path else extra_logging_configs_path
    load_yaml(iconfig_path)
    load_yaml(logging_path)

    iconfig = load_config(iconfig_path)
    configure_logging(extra_logging_configs_path=logging_path)
    logger.info("Starting bess_bench session with iconfig: %s", iconfig_path)
    return iconfig
