import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))
    elif report.when == "setup" and report.outcome != "passed" and "test_acceptance.py" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")


@pytest.fixture
def tridiag():
    """1/4 [[1,1,0],[1,2,1],[0,1,1]]: irreducible, rank 2, eigenvalues 0, 1/4, 3/4."""
    return np.array([[1, 1, 0], [1, 2, 1], [0, 1, 1]], dtype=complex) / 4


@pytest.fixture
def plus():
    return np.full((2, 2), 0.5, dtype=complex)


@pytest.fixture
def mixed_qubit():
    """0.75 |+><+| + 0.25 |-><-|."""
    return np.array([[0.5, 0.25], [0.25, 0.5]], dtype=complex)
