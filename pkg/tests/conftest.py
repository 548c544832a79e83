import numpy as np
import pytest

from specidx import potentials as pot
from specidx.lattice import Grid1D, build_h0


@pytest.fixture(scope="session")
def well8():
    return pot.gaussian(8.0, 1.0)


@pytest.fixture(scope="session")
def grid400():
    return Grid1D(-20.0, 20.0, 400)


@pytest.fixture(scope="session")
def h0_400(grid400):
    return build_h0(grid400)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
