"""Geodesic node load under one unit of demand per unordered node pair.

Each pair's unit is split equally over all of its shortest paths; a node is
credited only for paths on which it is an interior point.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

import numba
import numpy as np

from . import _kernels
from .graph import DisconnectedGraphError, Graph, GraphError

BRUTE_FORCE_CAP = 14
# fixed source partition; merge order never depends on the thread count
_SOURCE_BLOCKS = 64


@dataclass
class LoadProfile:
    load: np.ndarray
    total_demand: float
    max_load: float
    argmax: int
    routing: str = "equal_split_geodesic"

    @classmethod
    def from_loads(cls, load) -> "LoadProfile":
        load = np.asarray(load, dtype=np.float64)
        n = load.size
        arg = int(np.argmax(load))
        return cls(load, n * (n - 1) / 2, float(load[arg]), arg)

    def to_dict(self) -> dict:
        return {
            "load": [float(x) for x in self.load],
            "max": self.max_load,
            "argmax": self.argmax,
            "total_demand": self.total_demand,
        }


def default_workers() -> int:
    env = os.environ.get("CONGESTION_LAB_THREADS")
    if env:
        return max(1, int(env))
    return numba.config.NUMBA_NUM_THREADS


def geodesic_load(graph: Graph, weighted: bool = False, workers: int | None = None) -> LoadProfile:
    """Equal-split geodesic load via dependency accumulation over all sources.

    ``weighted=False`` treats every edge as unit length. The result is bit
    identical for any ``workers`` value.
    """
    indptr, indices, lengths = graph.csr
    n = graph.n
    nblocks = min(_SOURCE_BLOCKS, n)
    bounds = np.linspace(0, n, nblocks + 1).round().astype(np.int64)
    workers = workers or default_workers()
    previous = numba.get_num_threads()
    numba.set_num_threads(min(workers, numba.config.NUMBA_NUM_THREADS))
    try:
        parts, reach = _kernels.block_loads(indptr, indices, lengths, bool(weighted), bounds)
    finally:
        numba.set_num_threads(previous)
    if reach < n:
        raise DisconnectedGraphError("load is undefined on a disconnected graph")
    total = np.zeros(n)
    for row in parts:
        total += row
    # every unordered pair was visited from both ends
    return LoadProfile.from_loads(total / 2.0)


def _floyd_warshall(graph: Graph, weighted: bool) -> list:
    n = graph.n
    d = [[math.inf] * n for _ in range(n)]
    for v in range(n):
        d[v][v] = 0.0
    for u, v, length in graph.edges:
        w = length if weighted else 1.0
        d[u][v] = d[v][u] = min(d[u][v], w)
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik == math.inf:
                continue
            di = d[i]
            for j in range(n):
                alt = dik + dk[j]
                if alt < di[j]:
                    di[j] = alt
    return d


def brute_force_load(graph: Graph, weighted: bool = False, max_nodes: int = BRUTE_FORCE_CAP) -> LoadProfile:
    """Enumerate every geodesic of every pair explicitly; exact rational split.

    Independent of the accumulation kernel: distances come from Floyd-Warshall
    and paths from a depth-first walk over tight edges.
    """
    n = graph.n
    if n > max_nodes:
        raise GraphError(f"brute force is capped at {max_nodes} nodes, got {n}")
    d = _floyd_warshall(graph, weighted)
    if any(math.isinf(x) for row in d for x in row):
        raise DisconnectedGraphError("load is undefined on a disconnected graph")

    def step(u, v):
        return graph.length(u, v) if weighted else 1.0

    def tight(a, b, t):
        return abs(d[a][b] + d[b][t] - d[a][t]) <= 1e-12 * max(d[a][t], 1.0)

    load = [Fraction(0)] * n
    for s in range(n):
        for t in range(s + 1, n):
            paths = []
            stack = [(s, [s])]
            while stack:
                u, path = stack.pop()
                if u == t:
                    paths.append(path)
                    continue
                for w in graph.neighbors(u):
                    if abs(d[s][u] + step(u, w) - d[s][w]) <= 1e-12 * max(d[s][w], 1.0) and tight(s, w, t):
                        stack.append((w, path + [w]))
            share = Fraction(1, len(paths))
            for path in paths:
                for v in path[1:-1]:
                    load[v] += share
    return LoadProfile.from_loads([float(x) for x in load])


def load_at(graph: Graph, profile: LoadProfile, node: int) -> float:
    if not isinstance(node, (int, np.integer)) or not 0 <= node < graph.n:
        raise GraphError(f"invalid node id {node!r}")
    return float(profile.load[node])


def max_load(profile: LoadProfile) -> tuple:
    return profile.argmax, profile.max_load


def load_histogram(profile: LoadProfile, bins: int = 10) -> dict:
    counts, edges = np.histogram(profile.load, bins=bins)
    return {"counts": counts.tolist(), "edges": edges.tolist()}
