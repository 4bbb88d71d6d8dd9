"""
BESS formulation benchmark package.

Linear battery storage formulations, the solvers that run them and the
set-point tracking and transmission expansion experiments built on them.
"""

from apsbits.utils.logging_setup import configure_logging

__version__ = "0.1.0"

configure_logging()
