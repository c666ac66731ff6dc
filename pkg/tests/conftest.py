import numpy as np
import pytest

from lamebic.darboux import build_chain
from lamebic.grid import Grid, SampledFunction
from lamebic.lame import LameConfig, band_edge_states, lame_potential


@pytest.fixture(scope="session")
def grid():
    return Grid()


@pytest.fixture(scope="session")
def cfg():
    return LameConfig(2, 0.5)


@pytest.fixture(scope="session")
def V(cfg, grid):
    return SampledFunction(grid, lame_potential(cfg, grid.x), "V")


@pytest.fixture(scope="session")
def states(cfg, grid):
    return [s.sample(grid) for s in band_edge_states(cfg)]


@pytest.fixture(scope="session")
def psi2(states):
    return states[2]


@pytest.fixture(scope="session")
def psi3(states):
    return states[3]


@pytest.fixture(scope="session")
def chain(cfg, grid):
    return build_chain(cfg, grid, 1.0, 1.0, steps=2)


@pytest.fixture(scope="session")
def chain1(cfg, grid):
    return build_chain(cfg, grid, 1.0, steps=1)


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import VERDICTS

    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in VERDICTS:
            terminalreporter.write_line(line)
