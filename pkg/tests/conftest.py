import pytest
from hypothesis import settings

from arcgraph.surface import builtin_surface
from arcgraph.torus import punctured_torus

settings.register_profile("arcgraph", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("arcgraph")


@pytest.fixture(scope="session")
def torus():
    return punctured_torus()


@pytest.fixture(scope="session")
def T(torus):
    return torus.T


@pytest.fixture(scope="session")
def sphere():
    return builtin_surface("s04")


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[k])
