import numpy as np
import pytest

from onebitboost.core import Instance


def make_instance(X, y, **kw):
    return Instance(np.asarray(X, dtype=float), np.asarray(y, dtype=float), **kw)


@pytest.fixture
def two_axis():
    """X1 = e1 (y=+1), X2 = e2 (y=-1)."""
    return make_instance([[1.0, 0.0], [0.0, 1.0]], [1, -1])


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
