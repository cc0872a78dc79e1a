import numpy as np
import pytest

from nmfcomm.graph import Graph


def clique_edges(nodes):
    return [(i, j, 1.0) for a, i in enumerate(nodes) for j in nodes[a + 1 :]]


@pytest.fixture
def two_cliques() -> Graph:
    """Two disconnected unit-weight 3-cliques on nodes 0-2 and 3-5."""
    return Graph(n=6, edges=tuple(clique_edges([0, 1, 2]) + clique_edges([3, 4, 5])))


@pytest.fixture
def bridged_cliques() -> Graph:
    """Two 3-cliques joined by one bridge edge (7 edges total)."""
    edges = clique_edges([0, 1, 2]) + clique_edges([3, 4, 5]) + [(2, 3, 1.0)]
    return Graph(n=6, edges=tuple(edges))


def random_graph(rng: np.random.Generator, n: int, p: float = 0.4,
                 weighted: bool = True) -> Graph:
    """Random graph with at least one edge, for property tests."""
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                w = float(rng.uniform(0.5, 3.0)) if weighted else 1.0
                edges.append((i, j, w))
    if not edges:
        edges.append((0, 1 % n if n > 1 else 0 + 1, 1.0))
    return Graph(n=n, edges=tuple(edges))
