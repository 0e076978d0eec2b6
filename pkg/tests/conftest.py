"""Shared pytest configuration and fixtures."""
import pytest
from logging import Logger
from unittest.mock import Mock

from src.config.settings import Config


def pytest_addoption(parser):
    """Add --runslow for long statistical acceptance runs."""
    parser.addoption(
        "--runslow",
        action="store_true",
        default=False,
        help="run tests marked slow (>= 10^4 trials per point)",
    )


def pytest_configure(config):
    """Register the slow marker."""
    config.addinivalue_line("markers", "slow: long Monte Carlo acceptance run")


def pytest_collection_modifyitems(config, items):
    """Skip slow tests unless --runslow is given."""
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def logger():
    """Mock logger for injected services."""
    return Mock(spec=Logger)


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Point runtime settings at a temporary directory for every test."""
    monkeypatch.setenv("LOG_DIR", str(tmp_path / "logs"))
    monkeypatch.setenv("SIM_OUTPUT_DIR", str(tmp_path / "results"))
    monkeypatch.setenv("SIM_THREADS", "1")
    monkeypatch.setenv("LOG_LEVEL", "WARNING")
    Config.reset()
    yield
    Config.reset()
