"""
Shared pytest configuration.

Trend checks over many Monte-Carlo draws are marked ``slow`` and only run
with ``--runslow``.
"""

import pytest


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow Monte-Carlo trend checks")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: Monte-Carlo trend check over many draws")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
