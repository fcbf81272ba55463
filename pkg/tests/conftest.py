import numpy as np
import pytest

from epsls import corpus


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def crop128():
    return corpus.load("crop128")[:, :, 0]


@pytest.fixture(scope="session")
def crop256():
    return corpus.load("crop256")


@pytest.fixture(scope="session")
def detail_image():
    return corpus.load("detail")


# Criterion number -> summary line, filled by the acceptance suite.
_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture(scope="session")
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(number: int, title: str, passed: bool, detail: str) -> bool:
        line = f"[{'PASS' if passed else 'FAIL'}] #{number:<2d} {title}: {detail}"
        _ACCEPTANCE[number] = line
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[number])
