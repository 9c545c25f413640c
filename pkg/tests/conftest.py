from fractions import Fraction

import pytest
from hypothesis import strategies as st

from rayleighkit.graph import Edge, Multigraph

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def triangle_graph(w1=1, w2=1, w3=1):
    return Multigraph.from_tuples(3, [("e1", 0, 1, w1), ("e2", 1, 2, w2), ("e3", 2, 0, w3)])


def parallel_pair(a=Fraction(2, 3), b=Fraction(5, 7)):
    return Multigraph.from_tuples(2, [("e1", 0, 1, a), ("e2", 0, 1, b)])


def series_path():
    return Multigraph.from_tuples(3, [("e1", 0, 1), ("e2", 1, 2)])


def k4():
    pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    return Multigraph.from_tuples(4, [(f"e{k + 1}", u, v) for k, (u, v) in enumerate(pairs)])


@pytest.fixture
def triangle():
    return triangle_graph()


@pytest.fixture
def pair():
    return parallel_pair()


@pytest.fixture
def path():
    return series_path()


rationals = st.builds(Fraction, st.integers(1, 30), st.integers(1, 30))


@st.composite
def connected_graphs(draw, max_vertices=6, max_edges=9, loops=False):
    """Connected multigraphs with random orientations and rational weights."""
    n = draw(st.integers(1, max_vertices))
    pairs = [(draw(st.integers(0, v - 1)), v) for v in range(1, n)]
    extra = draw(st.integers(0, max(0, max_edges - len(pairs))))
    for _ in range(extra):
        u = draw(st.integers(0, n - 1))
        v = draw(st.integers(0, n - 1))
        if u == v and not (loops and n >= 1):
            continue
        pairs.append((u, v))
    order = draw(st.permutations(range(len(pairs))))
    edges = []
    for k, idx in enumerate(order):
        u, v = pairs[idx]
        if draw(st.booleans()):
            u, v = v, u
        edges.append(Edge(f"e{k}", u, v, draw(rationals)))
    return Multigraph(n, tuple(edges))
