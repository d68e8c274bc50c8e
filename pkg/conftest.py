# conftest.py
"""
Shared fixtures: seeded streams, small kappa grids and the common windows
"""

import pytest

from errors import recovery_engine
from measures import RngStream
from oscillator import GridSpec
from windows import chi, delta_block, dyadic_truncation, gaussian


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run acceptance-scale checks")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: acceptance-scale statistical checks (need --runslow)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def clean_recovery_engine():
    recovery_engine.reset()
    yield
    recovery_engine.reset()


@pytest.fixture
def rng():
    return RngStream(20240917)


@pytest.fixture
def small_grid():
    return GridSpec(48, 512, 32.0)


@pytest.fixture
def windows():
    return {
        "chi": chi(1.0),
        "chi_2": chi(2.0),
        "delta": delta_block(),
        "gaussian": gaussian(),
        "chi4": dyadic_truncation(1.0, 4),
        "chi4_2": dyadic_truncation(2.0, 4),
    }
