import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from sphillum import fixtures

settings.register_profile(
    "sphillum",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("sphillum")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def oct_():
    return fixtures.octant()


@pytest.fixture(scope="session")
def sim3():
    return fixtures.simplex(3)


ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = []


@pytest.fixture
def criterion(request):
    """Record for one acceptance criterion; ``ok`` is set only after every check passed."""
    rec = {"name": request.node.name, "ok": False, "detail": ""}
    yield rec
    request.config.stash[ACCEPTANCE_KEY].append(rec)
    line = f"ACCEPTANCE {rec['name']}: {'PASS' if rec['ok'] else 'FAIL'} {rec['detail']}"
    print(line)


def pytest_terminal_summary(terminalreporter, config):
    records = config.stash.get(ACCEPTANCE_KEY, [])
    if not records:
        return
    terminalreporter.section("acceptance criteria")
    for rec in sorted(records, key=lambda r: r["name"]):
        status = "PASS" if rec["ok"] else "FAIL"
        terminalreporter.write_line(f"{rec['name']}: {status}  {rec['detail']}")
