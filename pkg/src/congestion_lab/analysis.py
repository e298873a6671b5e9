"""Wedge-cut certificate, closed-form bounds, four-point delta and log-log fits."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .graph import DisconnectedGraphError, Graph, GraphError, require_connected

DELTA_CAP = 400


@dataclass
class GeodesicTree:
    root: int
    parent: list
    children: list
    rays: list


@dataclass
class CutCertificate:
    root: int
    radius: int
    rays: list
    split_index: int
    wedge_size: int
    complement_size: int
    cut_path: list
    bound: float
    theorem_bound: float
    max_increment: int

    def check(self) -> list:
        """Names of violated certificate invariants (empty when valid)."""
        N = self.wedge_size + self.complement_size
        n = self.radius
        bad = []
        if not (N <= 2 * self.wedge_size <= N + 2 * n):
            bad.append("wedge_size outside [N/2, N/2 + n]")
        if len(self.cut_path) > 2 * n + 1:
            bad.append("cut path longer than 2n + 1")
        if len(self.cut_path) <= 2 * n and self.bound < self.theorem_bound:
            bad.append("bound below closed-form bound")
        if self.max_increment > n:
            bad.append("wedge increment exceeds n")
        return bad

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ScalingFit:
    slope: float
    intercept: float
    r_squared: float
    slope_stderr: float
    points_used: int


def geodesic_spanning_tree(graph: Graph, root: int | None = None) -> GeodesicTree:
    """BFS tree from the rotation system with rays listed in rotation order.

    A node's parent is its first rotation neighbor one layer closer to the
    root. Children are visited in rotation order starting just after the
    parent (after the root's first entry at the root), so the root-to-leaf
    rays come out in cyclic order around the root.
    """
    if graph.rotation is None:
        raise GraphError("geodesic spanning tree needs a rotation system")
    root = graph.root if root is None else root
    if root is None:
        raise GraphError("no root given and graph has none")
    hops = _kernels.bfs(*graph.csr[:2], root)[0]
    if (hops < 0).any():
        raise DisconnectedGraphError("graph is disconnected")
    n = graph.n
    parent = [-1] * n
    for v in range(n):
        if v == root:
            continue
        parent[v] = next(w for w in graph.rotation[v] if hops[w] == hops[v] - 1)
    children = [[] for _ in range(n)]
    for v in range(n):
        rot = graph.rotation[v]
        if not rot:
            continue
        start = 0 if v == root else rot.index(parent[v]) + 1
        for i in range(len(rot)):
            w = rot[(start + i) % len(rot)]
            if parent[w] == v:
                children[v].append(w)
    rays = []
    stack = [(root, [root])]
    while stack:
        u, path = stack.pop()
        if not children[u]:
            rays.append(path)
            continue
        for w in reversed(children[u]):
            stack.append((w, path + [w]))
    return GeodesicTree(root, parent, children, rays)


def theorem1_bound(N: int, n: int) -> float:
    return N * N / (16 * n) - N / 8


def wedge_cut(graph: Graph, root: int | None = None) -> CutCertificate:
    """Split the cyclic ray sequence at the first prefix covering half the nodes."""
    tree = geodesic_spanning_tree(graph, root)
    N = graph.n
    rays = tree.rays
    hops = _kernels.bfs(*graph.csr[:2], tree.root)[0]
    radius = int(hops.max())
    covered = set()
    size_prev = 0
    max_inc = 0
    split = None
    for i, ray in enumerate(rays):
        covered.update(ray)
        if i > 0:
            max_inc = max(max_inc, len(covered) - size_prev)
        size_prev = len(covered)
        if split is None and 2 * len(covered) >= N:
            split = i
            wedge = len(covered)
    cut = sorted(set(rays[0]) | set(rays[split]))
    comp = N - wedge
    bound = wedge * comp / 2 / len(cut)
    return CutCertificate(
        root=tree.root,
        radius=radius,
        rays=rays,
        split_index=split + 1,
        wedge_size=wedge,
        complement_size=comp,
        cut_path=cut,
        bound=bound,
        theorem_bound=theorem1_bound(N, radius) if radius > 0 else -math.inf,
        max_increment=max_inc,
    )


def lemma_upper_bound(delta_max: int, D: float) -> float:
    """Degree-diameter load ceiling D^2 * Delta^2 * (Delta-1)^max(D-2, 0)."""
    D = math.ceil(D)
    try:
        return float(delta_max**2 * (delta_max - 1) ** max(D - 2, 0) * D**2)
    except OverflowError:
        return math.inf


def bollobas_bound(r: int, N: int, C: float = 0.0) -> float:
    if r <= 2:
        raise ValueError("need r >= 3")
    base = r - 1
    ln = math.log(N, base)
    return ln + math.log(ln, base) + C


def construction_exponent(k: int) -> float:
    if k < 3:
        raise ValueError("need k >= 3")
    return math.log(2 * k - 1) / math.log(k - 1)


def delta_hyperbolicity(graph: Graph, weighted: bool = False, max_nodes: int = DELTA_CAP) -> float:
    """Four-point delta by a full quadruple scan (quartic; size capped)."""
    if graph.n > max_nodes:
        raise GraphError(f"delta scan is capped at {max_nodes} nodes, got {graph.n}")
    require_connected(graph)
    indptr, indices, lengths = graph.csr
    dm = _kernels.distance_matrix(indptr, indices, lengths, bool(weighted))
    return float(_kernels.four_point_delta(dm))


def fit_scaling(points: Sequence) -> ScalingFit:
    """Least squares of log T against log N.

    With exactly two points the line is exact and r_squared/slope_stderr are
    reported as NaN.
    """
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 2:
        raise ValueError("need at least two points")
    if len({x for x, _ in pts}) != len(pts):
        raise ValueError("N values must be distinct")
    if any(x <= 0 or y <= 0 for x, y in pts):
        raise ValueError("N and T must be positive")
    lx = np.log([x for x, _ in pts])
    ly = np.log([y for _, y in pts])
    mx, my = lx.mean(), ly.mean()
    sxx = ((lx - mx) ** 2).sum()
    slope = float(((lx - mx) * (ly - my)).sum() / sxx)
    intercept = float(my - slope * mx)
    m = len(pts)
    if m < 3:
        return ScalingFit(slope, intercept, math.nan, math.nan, m)
    resid = ly - (intercept + slope * lx)
    ss_res = float((resid**2).sum())
    ss_tot = float(((ly - my) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    stderr = math.sqrt(ss_res / (m - 2) / sxx)
    return ScalingFit(slope, intercept, min(max(r2, 0.0), 1.0), stderr, m)


def layer_growth(graph: Graph) -> ScalingFit:
    """Fit log |S_p| against p; exp(slope) estimates the growth constant."""
    if graph.layer is None:
        raise GraphError("graph has no layer labels")
    counts = np.bincount(graph.layer)
    pts = [(p, c) for p, c in enumerate(counts) if p >= 1]
    if len(pts) < 2:
        raise ValueError("need at least two non-empty layers beyond the root")
    xs = np.array([p for p, _ in pts], dtype=float)
    ys = np.log([c for _, c in pts])
    slope, intercept = np.polyfit(xs, ys, 1)
    return ScalingFit(float(slope), float(intercept), math.nan, math.nan, len(pts))
