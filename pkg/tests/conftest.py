import numpy as np
import pytest

from ctqwloc.graph import build_graph, hamiltonian
from ctqwloc.netgen import recursive_triangle
from ctqwloc.spectral import eig_sym
from ctqwloc.verify import random_connected_graph


def decompose(g, tau=1e-8):
    return eig_sym(hamiltonian(g), tau)


@pytest.fixture
def k3():
    return build_graph(3, [(1, 2), (2, 3), (3, 1)])


@pytest.fixture
def path2():
    return build_graph(2, [(1, 2)])


@pytest.fixture(scope="session")
def d1():
    return recursive_triangle(1)[0]


@pytest.fixture(scope="session")
def d1_decomp(d1):
    return decompose(d1)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def small_graphs():
    """Twenty seeded random connected graphs with 3 <= N <= 12."""
    r = np.random.default_rng(99)
    return [random_connected_graph(r, int(r.integers(3, 13))) for _ in range(20)]


# one pass/fail line per acceptance criterion, echoed after the test session
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
