import numpy as np
import pytest

from noisymagic.qstate import DensityMatrix
from noisymagic.stabilizers import get_table


def pytest_terminal_summary(terminalreporter):
    # echo the acceptance criterion verdicts even when capture is on
    import sys

    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(module, "REPORT_LINES", None) if module else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def table1():
    return get_table(1)


@pytest.fixture(scope="session")
def table2():
    return get_table(2)


@pytest.fixture(scope="session")
def table3():
    return get_table(3)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def h_state():
    return DensityMatrix.from_state_vector(
        np.array([1.0, np.exp(1j * np.pi / 4)]) / np.sqrt(2)
    )


@pytest.fixture
def plus_state():
    return DensityMatrix.from_state_vector(np.array([1.0, 1.0]) / np.sqrt(2))
