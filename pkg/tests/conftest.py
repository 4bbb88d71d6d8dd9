"""Shared fixtures."""

import pytest

from bess_bench.bess_models import EXAMPLE_INITIAL
from bess_bench.bess_models import EXAMPLE_PARAMS
from bess_bench.instances import synth_pool
from bess_bench.solver import SolveConfig


@pytest.fixture
def example_bess():
    """Worked-example battery and its initial energy."""
    return EXAMPLE_PARAMS, EXAMPLE_INITIAL


@pytest.fixture
def solve_config():
    return SolveConfig()


@pytest.fixture(scope="session")
def small_pool():
    """Small synthetic profile pool shared by the instance tests."""
    return synth_pool(7, 20, 20)

