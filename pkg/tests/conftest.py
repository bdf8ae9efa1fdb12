import pytest

from lbcut.graph import Graph


def path_graph(n):
    return Graph(n, tuple((i, i + 1) for i in range(1, n)))


def cycle_graph(n):
    return Graph(n, tuple((i, i % n + 1) for i in range(1, n + 1)))


@pytest.fixture
def c6():
    return cycle_graph(6)


@pytest.fixture
def diamond_chord():
    # s=1, a=2, t=3, b=4
    return Graph(4, ((1, 2), (2, 3), (1, 4), (4, 3), (1, 3)))


@pytest.fixture
def star():
    # centre 1, leaves 2, 3, 4
    return Graph(4, ((1, 2), (1, 3), (1, 4)))
