"""Shared fixtures for the MaTIC test suite."""

import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from matic.agents import garage_scenario  # noqa: E402
from matic.config.settings import ENV_OVERRIDES, get_settings  # noqa: E402
from matic.events import Event, Trace  # noqa: E402

SCENARIOS = ROOT / "scenarios"


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: acceptance-scale runs (deselect with -m 'not slow')")


@pytest.fixture
def scenarios_dir() -> Path:
    return SCENARIOS


@pytest.fixture
def abc_trace() -> Trace:
    """Three events a, b, c at ticks 0, 1, 2."""
    events = [Event("e1", 0, 1, "a"), Event("e2", 1, 1, "b"), Event("e3", 2, 1, "c")]
    return Trace(frozenset({"a", "b", "c"}), tuple(events), "abc")


@pytest.fixture
def garage():
    return garage_scenario()


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch):
    for var in ("MATIC_CONFIG", *ENV_OVERRIDES):
        monkeypatch.delenv(var, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
