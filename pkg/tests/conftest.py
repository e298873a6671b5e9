import itertools

import numpy as np
import pytest

from congestion_lab.graph import Graph, is_connected


def path_graph(n):
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)), family="path")


def cycle_graph(n):
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)), family="cycle")


def star_graph(m):
    return Graph(m + 1, tuple((0, i) for i in range(1, m + 1)), root=0, family="star")


def complete_graph(n):
    return Graph(n, tuple(itertools.combinations(range(n), 2)), family="complete")


def random_connected(rng, n, p, weighted=False):
    """Erdos-Renyi sample, redrawn until connected."""
    while True:
        edges = []
        for u, v in itertools.combinations(range(n), 2):
            if rng.random() < p:
                length = float(rng.integers(1, 4)) if weighted else 1.0
                edges.append((u, v, length))
        if not edges:
            continue
        g = Graph(n, tuple(edges), family="erdos_renyi")
        if is_connected(g):
            return g


def corpus(count, seed=20240101, n_range=(2, 12), weighted=False):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        p = float(rng.uniform(0.2, 0.8))
        out.append(random_connected(rng, n, p, weighted))
    return out


def to_nx(graph, weighted=False):
    import networkx as nx

    g = nx.Graph()
    g.add_nodes_from(range(graph.n))
    for u, v, length in graph.edges:
        g.add_edge(u, v, weight=length if weighted else 1.0)
    return g


@pytest.fixture
def named_graphs():
    return {
        "P3": path_graph(3),
        "P5": path_graph(5),
        "C4": cycle_graph(4),
        "C5": cycle_graph(5),
        "C6": cycle_graph(6),
        "star4": star_graph(4),
        "K4": complete_graph(4),
    }


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
