import numpy as np
import pytest

from driftpath.grid import HexGrid, LonLatGrid

_ACCEPTANCE: list[tuple[str, bool, str]] = []


def record_criterion(name: str, passed: bool, detail: str = "") -> None:
    _ACCEPTANCE.append((name, bool(passed), detail))


@pytest.fixture
def criterion():
    """Record a criterion outcome for the summary, then assert it."""

    def check(name, passed, detail=""):
        record_criterion(name, passed, detail)
        assert passed, f"{name}: {detail}"

    return check


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}".rstrip())


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def hex3():
    return HexGrid(3)


@pytest.fixture(scope="session")
def deg1():
    return LonLatGrid(1.0)
