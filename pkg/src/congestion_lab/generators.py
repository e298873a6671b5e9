"""Seeded constructors for the graph families used in the congestion sweeps.

Every generator returns an immutable :class:`~congestion_lab.graph.Graph`
with ``root`` set. Planar families carry a rotation system.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .graph import Graph, GraphError, ball

MAX_TRIES = 10_000

FAMILIES = (
    "regular_tree",
    "hpq",
    "sphere_wired",
    "grid",
    "tree_cross_z",
    "bridged_grids",
    "random_regular",
)


class GeneratorError(GraphError):
    pass


def _rng(seed, *salt) -> np.random.Generator:
    if seed is None:
        raise GeneratorError("a seed is required for randomized families")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), *salt])))


# -- trees ---------------------------------------------------------------


def gen_regular_tree(k: int, n: int) -> Graph:
    """Radius-n ball of the infinite k-regular tree, numbered breadth first."""
    if k < 3:
        raise GeneratorError(f"tree degree k must be >= 3, got {k}")
    if n < 0:
        raise GeneratorError("radius must be non-negative")
    edges = []
    children = [[]]
    parent = [None]
    frontier = [0]
    for depth in range(n):
        nxt = []
        for u in frontier:
            for _ in range(k if depth == 0 else k - 1):
                v = len(parent)
                parent.append(u)
                children.append([])
                children[u].append(v)
                edges.append((u, v))
                nxt.append(v)
        frontier = nxt
    rotation = [
        tuple(children[v]) if parent[v] is None else (parent[v], *children[v])
        for v in range(len(parent))
    ]
    return Graph(len(parent), tuple(edges), tuple(rotation), root=0, family="regular_tree")


# -- {p,q} tessellation --------------------------------------------------


class _Tiling:
    """Disk of p-gons grown outward one face at a time.

    The boundary is a counterclockwise cycle kept as a doubly linked list.
    ``rot[v]`` is v's neighbor list in counterclockwise order; for a boundary
    vertex it runs from its boundary successor to its boundary predecessor,
    the open exterior sector sitting between the last and the first entry.
    ``faces[v]`` counts faces already incident to v; q means v is complete.
    """

    def __init__(self, p: int, q: int):
        self.p, self.q = p, q
        self.rot = [[]]
        self.faces = [q]
        self.nxt = {}
        self.prv = {}
        ring = []
        for i in range(q):
            r = self._new()
            ring.append(r)
        self.rot[0] = list(ring)
        cycle = []
        for i in range(q):
            cycle.append(ring[i])
            for _ in range(p - 3):
                cycle.append(self._new())
        m = len(cycle)
        for i, v in enumerate(cycle):
            self.nxt[v] = cycle[(i + 1) % m]
            self.prv[v] = cycle[(i - 1) % m]
        for v in cycle:
            if v in ring:
                self.rot[v] = [self.nxt[v], 0, self.prv[v]]
                self.faces[v] = 2
            else:
                self.rot[v] = [self.nxt[v], self.prv[v]]
                self.faces[v] = 1

    def _new(self) -> int:
        self.rot.append([])
        self.faces.append(0)
        return len(self.rot) - 1

    def add_face(self, a: int) -> None:
        """Attach a p-gon on the exterior of boundary edge (a, next(a))."""
        p, q = self.p, self.q
        chain = [a, self.nxt[a]]
        # absorb neighbours whose last missing face is this one
        while self.faces[chain[-1]] == q - 1 and len(chain) <= p:
            chain.append(self.nxt[chain[-1]])
        while self.faces[chain[0]] == q - 1 and len(chain) <= p:
            chain.insert(0, self.prv[chain[0]])
        m = len(chain) - 1
        t = p - (m + 1)
        if t < 0 or chain[0] == chain[-1]:
            raise GeneratorError("face closure is inconsistent with a {p,q} tiling")
        c0, cm = chain[0], chain[-1]
        new = [self._new() for _ in range(t)]
        # outer path cm -> new[0] -> ... -> new[-1] -> c0
        path = [cm, *new, c0]
        if t == 0 and cm in self.rot[c0]:
            raise GeneratorError("closing edge would duplicate an existing edge")
        self.rot[cm].append(path[1])
        self.rot[c0].insert(0, path[-2])
        for j, x in enumerate(new, start=1):
            # boundary order (ccw) runs c0, new[-1], ..., new[0], cm
            self.rot[x] = [path[j - 1], path[j + 1]]
            self.faces[x] = 1
        for v in chain[1:-1]:
            self.faces[v] = q
            del self.nxt[v], self.prv[v]
        self.faces[c0] += 1
        self.faces[cm] += 1
        seq = [c0, *reversed(new), cm]
        for u, v in zip(seq, seq[1:]):
            self.nxt[u] = v
            self.prv[v] = u

    def complete(self, v: int) -> None:
        while self.faces[v] < self.q:
            if v not in self.nxt:
                raise GeneratorError(f"vertex {v} left the boundary incomplete")
            self.add_face(v)

    def graph(self) -> Graph:
        edges = {(min(u, w), max(u, w)) for u, r in enumerate(self.rot) for w in r}
        return Graph(len(self.rot), tuple(sorted(edges)), tuple(map(tuple, self.rot)), root=0, family="hpq")


def _check_pq(p: int, q: int) -> None:
    if p < 3 or q < 3:
        raise GeneratorError("p and q must both be >= 3")
    if Fraction(1, p) + Fraction(1, q) >= Fraction(1, 2):
        raise GeneratorError(f"{{{p},{q}}} is not hyperbolic: need 1/p + 1/q < 1/2")


def gen_hpq(p: int, q: int, n: int) -> Graph:
    """Radius-n ball around a vertex of the {p,q} tessellation.

    Vertices are completed in creation order; growth stops once every vertex
    within n hops of the center has all q faces, so the ball is exact.
    """
    _check_pq(p, q)
    if n < 0:
        raise GeneratorError("radius must be non-negative")
    tiling = _Tiling(p, q)
    done = 1
    while True:
        g = tiling.graph()
        layer = g.layer
        if all(tiling.faces[v] == q for v in range(g.n) if layer[v] <= n):
            return ball(g, 0, n)
        target = len(tiling.rot)
        while done < target:
            tiling.complete(done)
            done += 1


def face_cycles(graph: Graph) -> list:
    """Faces traced from the rotation system (successor of (u,v) is (v, rot_v after u))."""
    if graph.rotation is None:
        raise GraphError("face tracing needs a rotation system")
    pos = [{w: i for i, w in enumerate(r)} for r in graph.rotation]
    seen = set()
    faces = []
    for u in range(graph.n):
        for v in graph.rotation[u]:
            if (u, v) in seen:
                continue
            face = []
            a, b = u, v
            while (a, b) not in seen:
                seen.add((a, b))
                face.append(a)
                r = graph.rotation[b]
                # next dart turns clockwise at b: predecessor of a in b's ccw order
                c = r[(pos[b][a] - 1) % len(r)]
                a, b = b, c
            faces.append(face)
    return faces


# -- random regular graphs -----------------------------------------------


def _pairs_simple(pairs: np.ndarray, n: int) -> bool:
    a, b = pairs[:, 0], pairs[:, 1]
    if (a == b).any():
        return False
    lo, hi = np.minimum(a, b), np.maximum(a, b)
    codes = lo * n + hi
    return np.unique(codes).size == codes.size


def _configuration_rejection(degrees: np.ndarray, rng, max_tries: int = MAX_TRIES) -> np.ndarray:
    """Uniform simple graph with the given degrees by whole-sample rejection."""
    n = degrees.size
    stubs = np.repeat(np.arange(n, dtype=np.int64), degrees)
    for _ in range(max_tries):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        if _pairs_simple(pairs, n):
            return pairs
    raise GeneratorError(f"configuration model: no simple graph after {max_tries} tries")


def _configuration_pairing(degrees: np.ndarray, rng, max_tries: int = MAX_TRIES) -> np.ndarray:
    """Simple graph with the given degrees by repeated partial pairing.

    Valid pairs of each round are kept and the leftover stubs reshuffled; a
    round that cannot place any further edge restarts from scratch.
    """
    n = degrees.size
    all_stubs = np.repeat(np.arange(n, dtype=np.int64), degrees)
    for _ in range(max_tries):
        edges = set()
        stubs = all_stubs
        while stubs.size:
            pairs = rng.permutation(stubs).reshape(-1, 2)
            lo = np.minimum(pairs[:, 0], pairs[:, 1])
            hi = np.maximum(pairs[:, 0], pairs[:, 1])
            left = []
            for u, v in zip(lo.tolist(), hi.tolist()):
                if u != v and (u, v) not in edges:
                    edges.add((u, v))
                else:
                    left += (u, v)
            if len(left) == stubs.size:
                if not _can_pair(left, edges):
                    break
            stubs = np.asarray(left, dtype=np.int64)
        else:
            return np.array(sorted(edges), dtype=np.int64).reshape(-1, 2)
    raise GeneratorError(f"configuration model: no simple graph after {max_tries} tries")


def _can_pair(stubs, edges) -> bool:
    nodes = sorted(set(stubs))
    return any(
        (u, v) not in edges for u, v in itertools.combinations(nodes, 2)
    )


def gen_random_regular(r: int, N: int, seed) -> Graph:
    """Simple r-regular graph on N nodes; connectivity is not enforced."""
    if r < 3:
        raise GeneratorError("degree r must be >= 3")
    if (r * N) % 2:
        raise GeneratorError(f"r*N must be even, got r={r}, N={N}")
    if N <= r:
        raise GeneratorError("need N > r")
    pairs = _configuration_rejection(np.full(N, r), _rng(seed, r, N))
    return Graph(N, tuple(map(tuple, pairs.tolist())), root=0, family="random_regular")


def _wire_sphere(nodes: list, k: int, rng) -> list:
    m = len(nodes)
    if m <= k:
        return [(nodes[i], nodes[j]) for i, j in itertools.combinations(range(m), 2)]
    degrees = np.full(m, k)
    if (k * m) % 2:
        degrees[-1] = k - 1
    pairs = _configuration_pairing(degrees, rng)
    return [(nodes[a], nodes[b]) for a, b in pairs.tolist()]


def gen_sphere_wired(k: int, n: int, seed) -> Graph:
    """k-regular tree ball with every sphere additionally wired k-regularly."""
    if n < 1:
        raise GeneratorError("radius must be >= 1")
    tree = gen_regular_tree(k, n)
    spheres = [[] for _ in range(n + 1)]
    for v, x in enumerate(tree.layer):
        spheres[x].append(v)
    edges = list(tree.edges)
    for depth in range(1, n + 1):
        edges += _wire_sphere(spheres[depth], k, _rng(seed, depth))
    return Graph(tree.n, tuple(edges), root=0, family="sphere_wired")


# -- lattices and products -----------------------------------------------


def gen_grid(q_dim: int, L: int) -> Graph:
    """Box {0..L-1}^q_dim with unit nearest-neighbor edges, rooted at the center cell."""
    if q_dim < 1 or L < 2:
        raise GeneratorError("need q_dim >= 1 and L >= 2")
    shape = (L,) * q_dim
    N = L**q_dim
    idx = np.arange(N).reshape(shape)
    edges = []
    for axis in range(q_dim):
        a = np.take(idx, range(L - 1), axis=axis).ravel()
        b = np.take(idx, range(1, L), axis=axis).ravel()
        edges += zip(a.tolist(), b.tolist())
    center = int(idx[(L // 2,) * q_dim])
    rotation = None
    if q_dim <= 2:
        rotation = []
        for v in range(N):
            coord = np.unravel_index(v, shape)
            steps = [(1,), (-1,)] if q_dim == 1 else [(0, 1), (-1, 0), (0, -1), (1, 0)]
            ring = []
            for d in steps:
                c = tuple(x + dx for x, dx in zip(coord, d))
                if all(0 <= x < L for x in c):
                    ring.append(int(idx[c]))
            rotation.append(tuple(ring))
        rotation = tuple(rotation)
    return Graph(N, tuple(edges), rotation, root=center, family="grid")


def gen_tree_cross_z(n: int) -> Graph:
    """Ball of radius n around (root, 0) in T3 x Z."""
    if n < 0:
        raise GeneratorError("radius must be non-negative")
    tree = gen_regular_tree(3, n)
    ids = {}
    for t in range(tree.n):
        rest = n - tree.layer[t]
        for z in range(-rest, rest + 1):
            ids[(t, z)] = len(ids)
    edges = []
    for (t, z), i in ids.items():
        if (t, z + 1) in ids:
            edges.append((i, ids[(t, z + 1)]))
        for u in tree.neighbors(t):
            if u > t and (u, z) in ids:
                edges.append((i, ids[(u, z)]))
    g = Graph(len(ids), tuple(edges), root=ids[(0, 0)], family="tree_cross_z")
    return ball(g, g.root, n)


def gen_bridged_grids(L: int) -> Graph:
    """Two L x L grids joined by one edge between their center cells."""
    grid = gen_grid(2, L)
    N = grid.n
    edges = [(u, v) for u, v, _ in grid.edges]
    edges += [(u + N, v + N) for u, v in edges]
    a, b = grid.root, grid.root + N
    edges.append((a, b))
    rotation = [tuple(r) for r in grid.rotation] + [tuple(w + N for w in r) for r in grid.rotation]
    rotation[a] = rotation[a] + (b,)
    rotation[b] = rotation[b] + (a,)
    return Graph(2 * N, tuple(edges), tuple(rotation), root=a, family="bridged_grids")


# -- declarative spec ----------------------------------------------------


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    params: dict = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise GeneratorError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        if self.family in ("sphere_wired", "random_regular") and self.seed is None:
            raise GeneratorError(f"family {self.family} needs a seed")
        if self.seed is not None and not 0 <= int(self.seed) < 2**64:
            raise GeneratorError("seed must be a 64-bit unsigned integer")

    def build(self) -> Graph:
        p = self.params
        try:
            if self.family == "regular_tree":
                return gen_regular_tree(p["k"], p["n"])
            if self.family == "hpq":
                return gen_hpq(p["p"], p["q"], p["n"])
            if self.family == "sphere_wired":
                return gen_sphere_wired(p["k"], p["n"], self.seed)
            if self.family == "grid":
                return gen_grid(p["q_dim"], p["L"])
            if self.family == "tree_cross_z":
                return gen_tree_cross_z(p["n"])
            if self.family == "bridged_grids":
                return gen_bridged_grids(p["L"])
            return gen_random_regular(p["r"], p["N"], self.seed)
        except KeyError as exc:
            raise GeneratorError(f"family {self.family} is missing parameter {exc.args[0]!r}") from None
