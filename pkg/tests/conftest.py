import numpy as np
import pytest

from pilotcap import _backend
from pilotcap.estimation import ChannelStats
from pilotcap.reference import EXAMPLE1_COVARIANCE, EXAMPLE2_COVARIANCE


def random_spd(rng, m, floor=0.1):
    B = rng.standard_normal((m, m))
    return B @ B.T / m + floor * np.eye(m)


@pytest.fixture(params=_backend.available())
def backend(request, monkeypatch):
    """Run the test once per importable kernel backend."""
    mod = _backend.get(request.param)
    monkeypatch.setattr(_backend, "kernels", mod)
    return mod


@pytest.fixture
def ex1():
    return ChannelStats.from_array(EXAMPLE1_COVARIANCE)


@pytest.fixture
def ex2():
    return ChannelStats.from_array(EXAMPLE2_COVARIANCE)


@pytest.fixture
def scalar_stats():
    return ChannelStats.from_array([[1.0]])


# filled by test_acceptance; printed after the run even when output is captured
ACCEPTANCE_LOG = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LOG:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(ACCEPTANCE_LOG, key=lambda s: int(s.split()[1].rstrip(":"))):
        terminalreporter.write_line(line)
