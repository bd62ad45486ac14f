import pytest
from hypothesis import HealthCheck, settings

from qtm import catalog
from qtm.surface import exchange_matrix

# Seed-fixed: derandomize makes every run draw the same examples.
settings.register_profile(
    "qtm",
    max_examples=1000,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("qtm")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[0][2:])):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def oht():
    return catalog.get("one-holed-torus")


@pytest.fixture(scope="session")
def oht_eps(oht):
    return exchange_matrix(oht.surface)


@pytest.fixture(scope="session")
def opt():
    return catalog.get("once-punctured-torus")


@pytest.fixture(scope="session")
def opt_flipped():
    return catalog.get("once-punctured-torus-flipped")
