"""Immutable weighted graph, shortest-path machinery and JSON serialization."""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels

INF = math.inf


class GraphError(ValueError):
    """Invalid graph data or an invalid request against a graph."""


class DisconnectedGraphError(GraphError):
    pass


@dataclass(frozen=True, eq=False)
class Graph:
    """Finite simple undirected graph with positive edge lengths.

    Node ids are ``0..n-1``. ``rotation`` (cyclic neighbor order per node)
    encodes a planar embedding when present. If ``root`` is given and
    ``layer`` is not, layers are computed as hop distances from the root.
    """

    n: int
    edges: tuple
    rotation: Optional[tuple] = None
    layer: Optional[tuple] = None
    root: Optional[int] = None
    family: str = ""
    _adj: tuple = field(init=False, repr=False)
    _csr: tuple = field(init=False, repr=False)
    _lengths: dict = field(init=False, repr=False)

    def __post_init__(self):
        n = self.n
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise GraphError(f"node count must be a positive integer, got {n!r}")
        object.__setattr__(self, "n", int(n))
        norm = {}
        for e in self.edges:
            if len(e) == 2:
                u, v, length = e[0], e[1], 1.0
            else:
                u, v, length = e
            u, v, length = int(u), int(v), float(length)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) references a node outside 0..{n - 1}")
            if u == v:
                raise GraphError(f"self-loop at node {u}")
            if not (length > 0 and math.isfinite(length)):
                raise GraphError(f"edge ({u},{v}) has non-positive or non-finite length {length}")
            key = (u, v) if u < v else (v, u)
            if key in norm:
                raise GraphError(f"duplicate edge {key}")
            norm[key] = length
        keys = sorted(norm)
        object.__setattr__(self, "edges", tuple((u, v, norm[(u, v)]) for u, v in keys))
        object.__setattr__(self, "_lengths", norm)

        nbrs = [[] for _ in range(n)]
        for u, v in keys:
            nbrs[u].append(v)
            nbrs[v].append(u)
        adj = tuple(tuple(sorted(x)) for x in nbrs)
        object.__setattr__(self, "_adj", adj)

        if self.rotation is not None:
            if len(self.rotation) != n:
                raise GraphError("rotation must list every node")
            rot = tuple(tuple(int(w) for w in r) for r in self.rotation)
            for v, r in enumerate(rot):
                if len(r) != len(adj[v]) or set(r) != set(adj[v]):
                    raise GraphError(f"rotation at node {v} is not a permutation of its neighbors")
            object.__setattr__(self, "rotation", rot)

        if self.root is not None:
            root = int(self.root)
            if not 0 <= root < n:
                raise GraphError(f"root {root} out of range")
            object.__setattr__(self, "root", root)

        indptr = np.zeros(n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(a) for a in adj])
        indices = np.fromiter((w for a in adj for w in a), dtype=np.int64, count=int(indptr[-1]))
        lengths = np.fromiter(
            (norm[(v, w) if v < w else (w, v)] for v, a in enumerate(adj) for w in a),
            dtype=np.float64,
            count=int(indptr[-1]),
        )
        for arr in (indptr, indices, lengths):
            arr.setflags(write=False)
        object.__setattr__(self, "_csr", (indptr, indices, lengths))

        if self.root is not None:
            hops, _ = _kernels.bfs(indptr, indices, self.root)
            computed = tuple(int(h) if h >= 0 else -1 for h in hops)
            if self.layer is None:
                object.__setattr__(self, "layer", computed)
            elif tuple(int(x) for x in self.layer) != computed:
                raise GraphError("layer labels disagree with hop distance from root")
            else:
                object.__setattr__(self, "layer", computed)
        elif self.layer is not None:
            lay = tuple(int(x) for x in self.layer)
            if len(lay) != n or min(lay) < 0:
                raise GraphError("layer must hold a non-negative integer per node")
            object.__setattr__(self, "layer", lay)

    # -- accessors -------------------------------------------------------

    def neighbors(self, v: int) -> tuple:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def length(self, u: int, v: int) -> float:
        return self._lengths[(u, v) if u < v else (v, u)]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._lengths

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def csr(self):
        """(indptr, indices, lengths), read-only numpy arrays."""
        return self._csr

    @property
    def is_unit(self) -> bool:
        return all(length == 1.0 for _, _, length in self.edges)

    def replace(self, **changes) -> "Graph":
        fields = dict(
            n=self.n,
            edges=self.edges,
            rotation=self.rotation,
            layer=self.layer,
            root=self.root,
            family=self.family,
        )
        fields.update(changes)
        return Graph(**fields)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and self.edges == other.edges
            and self.rotation == other.rotation
            and self.layer == other.layer
            and self.root == other.root
            and self.family == other.family
        )

    __hash__ = None

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.edge_count}, family={self.family!r}, root={self.root})"


@dataclass
class SsspResult:
    source: int
    dist: list
    sigma: list
    preds: list


def _check_node(graph: Graph, v) -> int:
    if not isinstance(v, (int, np.integer)) or not 0 <= v < graph.n:
        raise GraphError(f"invalid node id {v!r} for graph with {graph.n} nodes")
    return int(v)


def bfs_sssp(graph: Graph, source: int) -> SsspResult:
    """Hop-count shortest paths with geodesic counts and predecessor lists."""
    source = _check_node(graph, source)
    indptr, indices, _ = graph.csr
    hops, order = _kernels.bfs(indptr, indices, source)
    dist = [float(h) if h >= 0 else INF for h in hops]
    sigma = [0.0] * graph.n
    preds = [[] for _ in range(graph.n)]
    sigma[source] = 1.0
    for w in order[1:]:
        w = int(w)
        for v in graph.neighbors(w):
            if hops[v] == hops[w] - 1:
                preds[w].append(v)
                sigma[w] += sigma[v]
    return SsspResult(source, dist, sigma, preds)


def dijkstra_sssp(graph: Graph, source: int) -> SsspResult:
    """Weighted shortest paths; ties detected with relative tolerance 1e-12."""
    source = _check_node(graph, source)
    indptr, indices, lengths = graph.csr
    dist, order = _kernels.dijkstra(indptr, indices, lengths, source)
    sigma = _kernels.weighted_sigma(indptr, indices, lengths, dist, order)
    preds = [[] for _ in range(graph.n)]
    for w in order[1:]:
        w = int(w)
        for v in graph.neighbors(w):
            if dist[v] < dist[w] and _kernels.is_tight(dist[v], graph.length(v, w), dist[w]):
                preds[w].append(v)
    return SsspResult(source, [float(d) for d in dist], [float(s) for s in sigma], preds)


def hop_distances(graph: Graph, source: int) -> np.ndarray:
    """Hop distances as an int array, -1 for unreachable nodes."""
    source = _check_node(graph, source)
    indptr, indices, _ = graph.csr
    return _kernels.bfs(indptr, indices, source)[0]


def is_connected(graph: Graph) -> bool:
    return bool((hop_distances(graph, 0) >= 0).all())


def require_connected(graph: Graph) -> None:
    if not is_connected(graph):
        raise DisconnectedGraphError(f"graph {graph!r} is disconnected")


def distance_matrix(graph: Graph, weighted: bool = False) -> np.ndarray:
    indptr, indices, lengths = graph.csr
    return _kernels.distance_matrix(indptr, indices, lengths, bool(weighted))


def diameter(graph: Graph, weighted: bool = False) -> float:
    """Exact diameter from an all-sources sweep. Raises on disconnected input."""
    indptr, indices, lengths = graph.csr
    ecc = _kernels.eccentricities(indptr, indices, lengths, bool(weighted))
    if np.isinf(ecc).any():
        raise DisconnectedGraphError("diameter of a disconnected graph is undefined")
    return float(ecc.max())


def _ordered_neighbors(graph: Graph, v: int, parent: Optional[int]) -> list:
    """Neighbors of v in rotation order starting at ``parent``, else sorted order.

    For the root of a rotation graph the anchor is the smallest-id neighbor so
    the resulting order does not depend on where a cyclic list was cut.
    """
    if graph.rotation is None:
        return list(graph.neighbors(v))
    rot = graph.rotation[v]
    if not rot:
        return []
    anchor = parent if parent is not None else min(rot)
    i = rot.index(anchor)
    return list(rot[i:] + rot[:i])


def ball(graph: Graph, center: int, radius: int) -> Graph:
    """Induced subgraph on nodes within ``radius`` hops of ``center``.

    Nodes are renumbered in BFS order from the center (rotation order breaks
    ties), the center becomes node 0 and the root; rotation lists are
    restricted to surviving neighbors and start at each node's BFS parent.
    """
    center = _check_node(graph, center)
    if radius < 0:
        raise GraphError("radius must be non-negative")
    new_id = {center: 0}
    parent = {center: None}
    order = [center]
    queue = deque([center])
    hop = {center: 0}
    while queue:
        u = queue.popleft()
        if hop[u] == radius:
            continue
        for w in _ordered_neighbors(graph, u, parent[u]):
            if w not in new_id:
                new_id[w] = len(order)
                parent[w] = u
                hop[w] = hop[u] + 1
                order.append(w)
                queue.append(w)
    edges = []
    for u in order:
        for w in graph.neighbors(u):
            if w in new_id and u < w:
                edges.append((new_id[u], new_id[w], graph.length(u, w)))
    rotation = None
    if graph.rotation is not None:
        rotation = []
        for u in order:
            kept = [new_id[w] for w in _ordered_neighbors(graph, u, parent[u]) if w in new_id]
            rotation.append(tuple(kept))
    return Graph(
        n=len(order),
        edges=tuple(edges),
        rotation=tuple(rotation) if rotation is not None else None,
        root=0,
        family=graph.family,
    )


def relabel(graph: Graph, perm: Sequence[int]) -> Graph:
    """Copy of the graph with node v renamed to perm[v]."""
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(graph.n)):
        raise GraphError("perm must be a permutation of node ids")
    edges = tuple((perm[u], perm[v], length) for u, v, length in graph.edges)
    rotation = None
    if graph.rotation is not None:
        rotation = [None] * graph.n
        for v, r in enumerate(graph.rotation):
            rotation[perm[v]] = tuple(perm[w] for w in r)
        rotation = tuple(rotation)
    root = perm[graph.root] if graph.root is not None else None
    layer = None
    if graph.layer is not None and root is None:
        layer = [0] * graph.n
        for v, x in enumerate(graph.layer):
            layer[perm[v]] = x
    return Graph(graph.n, edges, rotation, layer, root, graph.family)


def sphere(graph: Graph, center: int, radius: int) -> frozenset:
    hops = hop_distances(graph, center)
    return frozenset(int(v) for v in np.flatnonzero(hops == radius))


def degree_stats(graph: Graph) -> tuple:
    """(min degree, max degree, mean degree)."""
    deg = [graph.degree(v) for v in range(graph.n)]
    return min(deg), max(deg), sum(deg) / graph.n


def induced(graph: Graph, keep: Iterable[int]) -> Graph:
    """Subgraph on ``keep`` (any order); nodes numbered by sorted original id."""
    keep = sorted(set(keep))
    idx = {v: i for i, v in enumerate(keep)}
    edges = [(idx[u], idx[v], l) for u, v, l in graph.edges if u in idx and v in idx]
    return Graph(len(keep), tuple(edges), family=graph.family)


# -- serialization -------------------------------------------------------


def to_json(graph: Graph) -> str:
    doc = {
        "n": graph.n,
        "root": graph.root,
        "family": graph.family,
        "edges": [[u, v, length] for u, v, length in graph.edges],
        "rotation": [list(r) for r in graph.rotation] if graph.rotation is not None else None,
        "layer": list(graph.layer) if graph.layer is not None else None,
    }
    return json.dumps(doc, separators=(",", ":")) + "\n"


_SCHEMA_KEYS = {"n", "root", "family", "edges", "rotation", "layer"}


def from_json(text: str) -> Graph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or set(doc) != _SCHEMA_KEYS:
        raise GraphError(f"graph JSON must have exactly the keys {sorted(_SCHEMA_KEYS)}")
    if not isinstance(doc["n"], int) or isinstance(doc["n"], bool):
        raise GraphError("'n' must be an integer")
    if not isinstance(doc["family"], str):
        raise GraphError("'family' must be a string")
    edges = doc["edges"]
    if not isinstance(edges, list) or any(
        not isinstance(e, list) or len(e) != 3 or not all(isinstance(x, (int, float)) for x in e)
        for e in edges
    ):
        raise GraphError("'edges' must be a list of [u, v, length] triples")
    if any(isinstance(e[0], float) or isinstance(e[1], float) for e in edges):
        raise GraphError("edge endpoints must be integers")
    return Graph(
        n=doc["n"],
        edges=tuple(tuple(e) for e in edges),
        rotation=doc["rotation"],
        layer=doc["layer"],
        root=doc["root"],
        family=doc["family"],
    )


def save(graph: Graph, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(to_json(graph))


def load(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return from_json(fh.read())
