"""Edge-length multiplier schemes and their validity checks."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .graph import Graph, GraphError

KINDS = ("uniform", "bounded_random", "sphere_geometric", "sphere_calibrated")


@dataclass(frozen=True)
class WeightScheme:
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        p = self.params
        if self.kind not in KINDS:
            raise ValueError(f"unknown scheme {self.kind!r}; choose from {KINDS}")
        if self.kind == "uniform":
            _positive(p, "c")
        elif self.kind == "bounded_random":
            lo, hi = _positive(p, "lo"), _positive(p, "hi")
            if hi < lo:
                raise ValueError("bounded_random needs hi >= lo")
            if "seed" not in p:
                raise ValueError("bounded_random needs a seed")
        elif self.kind == "sphere_geometric":
            beta = p.get("beta")
            if beta is None or not 0 < beta < 1:
                raise ValueError("sphere_geometric needs beta in (0, 1)")
        else:
            _positive(p, "c")


def _positive(params, key) -> float:
    x = params.get(key)
    if x is None or not (x > 0 and math.isfinite(x)):
        raise ValueError(f"parameter {key!r} must be positive and finite, got {x!r}")
    return float(x)


def multipliers(graph: Graph, scheme: WeightScheme) -> list:
    """One multiplier per edge, aligned with ``graph.edges``."""
    p = scheme.params
    m = graph.edge_count
    if scheme.kind == "uniform":
        return [float(p["c"])] * m
    if scheme.kind == "bounded_random":
        lo, hi = float(p["lo"]), float(p["hi"])
        out = []
        for u, v, _ in graph.edges:
            # keyed by the edge itself, so order and parallelism do not matter
            rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(p["seed"]), u, v])))
            out.append(float(min(max(rng.uniform(lo, hi), lo), hi)))
        return out
    if graph.layer is None or graph.root is None:
        raise GraphError(f"scheme {scheme.kind} needs layer labels and a root")
    layer = graph.layer
    sizes = Counter(layer)
    out = []
    for u, v, _ in graph.edges:
        k = layer[u]
        if layer[v] != k:
            out.append(1.0)
        elif scheme.kind == "sphere_geometric":
            out.append(float(p["beta"]) ** k)
        else:
            out.append(float(p["c"]) * (k + 1) / sizes[k])
    return out


def apply_weights(graph: Graph, scheme: WeightScheme) -> Graph:
    """Same topology, each length scaled by its scheme multiplier."""
    w = multipliers(graph, scheme)
    edges = tuple((u, v, length * x) for (u, v, length), x in zip(graph.edges, w))
    return graph.replace(edges=edges)


def check_triangle(graph: Graph) -> list:
    """3-cycles (a, b, c), a < b < c, where one edge is longer than the other two together."""
    bad = []
    for a in range(graph.n):
        later = [b for b in graph.neighbors(a) if b > a]
        for i, b in enumerate(later):
            for c in later[i + 1:]:
                if not graph.has_edge(b, c):
                    continue
                x, y, z = graph.length(a, b), graph.length(b, c), graph.length(a, c)
                if x > y + z or y > x + z or z > x + y:
                    bad.append((a, b, c))
    return bad


def distance_distortion(original: Graph, remetrized: Graph, sample_pairs: int, seed) -> tuple:
    """(min, max) ratio of remetrized to original distance over sampled pairs."""
    if original.n != remetrized.n or original.n < 2:
        raise GraphError("graphs must share a node set of size >= 2")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed)])))
    pairs = []
    while len(pairs) < sample_pairs:
        s, t = rng.integers(0, original.n, size=2)
        if s != t:
            pairs.append((int(s), int(t)))
    by_source = {}
    for s, t in pairs:
        by_source.setdefault(s, []).append(t)
    ratios = []
    for s in sorted(by_source):
        d0, _ = _kernels.dijkstra(*original.csr, s)
        d1, _ = _kernels.dijkstra(*remetrized.csr, s)
        for t in by_source[s]:
            if math.isinf(d0[t]) or math.isinf(d1[t]):
                raise GraphError("sampled pair is disconnected")
            ratios.append(d1[t] / d0[t])
    return float(min(ratios)), float(max(ratios))
