"""Compiled shortest-path, load and four-point kernels over CSR adjacency.

All kernels take ``indptr``/``indices`` (int64) and, where relevant, ``lengths``
(float64) arrays of a symmetric CSR adjacency. Nothing here validates input;
callers in :mod:`congestion_lab.graph` and :mod:`congestion_lab.load` do that.
"""

import numba
import numpy as np
from numba import njit, prange

# the bundled TBB is too old for numba; skip it rather than warn on every run
numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]

TIE_RTOL = 1e-12


@njit(cache=True, nogil=True)
def bfs(indptr, indices, src):
    n = indptr.shape[0] - 1
    dist = np.full(n, -1, dtype=np.int64)
    order = np.empty(n, dtype=np.int64)
    dist[src] = 0
    order[0] = src
    head = 0
    tail = 1
    while head < tail:
        u = order[head]
        head += 1
        du = dist[u]
        for p in range(indptr[u], indptr[u + 1]):
            w = indices[p]
            if dist[w] < 0:
                dist[w] = du + 1
                order[tail] = w
                tail += 1
    return dist, order[:tail]


@njit(cache=True, nogil=True)
def _heap_push(keys, vals, size, key, val):
    i = size
    keys[i] = key
    vals[i] = val
    while i > 0:
        parent = (i - 1) >> 1
        if keys[parent] <= keys[i]:
            break
        keys[parent], keys[i] = keys[i], keys[parent]
        vals[parent], vals[i] = vals[i], vals[parent]
        i = parent
    return size + 1


@njit(cache=True, nogil=True)
def _heap_pop(keys, vals, size):
    key = keys[0]
    val = vals[0]
    size -= 1
    keys[0] = keys[size]
    vals[0] = vals[size]
    i = 0
    while True:
        left = 2 * i + 1
        if left >= size:
            break
        child = left
        if left + 1 < size and keys[left + 1] < keys[left]:
            child = left + 1
        if keys[i] <= keys[child]:
            break
        keys[child], keys[i] = keys[i], keys[child]
        vals[child], vals[i] = vals[i], vals[child]
        i = child
    return key, val, size


@njit(cache=True, nogil=True)
def dijkstra(indptr, indices, lengths, src):
    """Distances (inf if unreachable) and settle order from ``src``."""
    n = indptr.shape[0] - 1
    dist = np.full(n, np.inf)
    done = np.zeros(n, dtype=np.bool_)
    order = np.empty(n, dtype=np.int64)
    cap = indices.shape[0] + 1
    keys = np.empty(cap)
    vals = np.empty(cap, dtype=np.int64)
    size = _heap_push(keys, vals, 0, 0.0, src)
    dist[src] = 0.0
    count = 0
    while size > 0:
        d, u, size = _heap_pop(keys, vals, size)
        if done[u]:
            continue
        done[u] = True
        order[count] = u
        count += 1
        for p in range(indptr[u], indptr[u + 1]):
            w = indices[p]
            alt = d + lengths[p]
            if alt < dist[w]:
                dist[w] = alt
                size = _heap_push(keys, vals, size, alt, w)
    return dist, order[:count]


@njit(cache=True, nogil=True)
def is_tight(du, length, dw):
    # relative tie test; remetrized graphs produce ties by symmetry
    return abs(du + length - dw) <= TIE_RTOL * max(abs(dw), 1.0)


@njit(cache=True, nogil=True)
def weighted_sigma(indptr, indices, lengths, dist, order):
    n = indptr.shape[0] - 1
    sigma = np.zeros(n)
    sigma[order[0]] = 1.0
    for i in range(1, order.shape[0]):
        w = order[i]
        s = 0.0
        for p in range(indptr[w], indptr[w + 1]):
            v = indices[p]
            if dist[v] < dist[w] and is_tight(dist[v], lengths[p], dist[w]):
                s += sigma[v]
        sigma[w] = s
    return sigma


@njit(cache=True, nogil=True)
def _accumulate_unweighted(indptr, indices, src, acc, delta, sigma):
    dist, order = bfs(indptr, indices, src)
    m = order.shape[0]
    for i in range(m):
        sigma[order[i]] = 0.0
        delta[order[i]] = 0.0
    sigma[src] = 1.0
    for i in range(1, m):
        w = order[i]
        s = 0.0
        dw = dist[w]
        for p in range(indptr[w], indptr[w + 1]):
            v = indices[p]
            if dist[v] == dw - 1:
                s += sigma[v]
        sigma[w] = s
    for i in range(m - 1, 0, -1):
        w = order[i]
        coeff = (1.0 + delta[w]) / sigma[w]
        dw = dist[w]
        for p in range(indptr[w], indptr[w + 1]):
            v = indices[p]
            if dist[v] == dw - 1:
                delta[v] += sigma[v] * coeff
        acc[w] += delta[w]
    return m


@njit(cache=True, nogil=True)
def _accumulate_weighted(indptr, indices, lengths, src, acc, delta):
    dist, order = dijkstra(indptr, indices, lengths, src)
    sigma = weighted_sigma(indptr, indices, lengths, dist, order)
    m = order.shape[0]
    for i in range(m):
        delta[order[i]] = 0.0
    for i in range(m - 1, 0, -1):
        w = order[i]
        coeff = (1.0 + delta[w]) / sigma[w]
        for p in range(indptr[w], indptr[w + 1]):
            v = indices[p]
            if dist[v] < dist[w] and is_tight(dist[v], lengths[p], dist[w]):
                delta[v] += sigma[v] * coeff
        acc[w] += delta[w]
    return m


@njit(cache=True, parallel=True)
def block_loads(indptr, indices, lengths, weighted, bounds):
    """Per-block dependency sums; block ``b`` covers sources bounds[b]:bounds[b+1].

    Returns (loads per block, minimum reach count). The block partition is
    fixed by the caller, so the ordered merge is independent of thread count.
    """
    n = indptr.shape[0] - 1
    nb = bounds.shape[0] - 1
    out = np.zeros((nb, n))
    reach = np.full(nb, n, dtype=np.int64)
    for b in prange(nb):
        delta = np.zeros(n)
        sigma = np.zeros(n)
        acc = np.zeros(n)
        for s in range(bounds[b], bounds[b + 1]):
            if weighted:
                m = _accumulate_weighted(indptr, indices, lengths, s, acc, delta)
            else:
                m = _accumulate_unweighted(indptr, indices, s, acc, delta, sigma)
            if m < reach[b]:
                reach[b] = m
        out[b, :] = acc
    return out, reach.min()


@njit(cache=True, parallel=True)
def eccentricities(indptr, indices, lengths, weighted):
    """Per-node eccentricity; inf marks a node that cannot reach every other."""
    n = indptr.shape[0] - 1
    ecc = np.zeros(n)
    for s in prange(n):
        if weighted:
            d, order = dijkstra(indptr, indices, lengths, s)
            if order.shape[0] < n:
                ecc[s] = np.inf
            else:
                ecc[s] = d.max()
        else:
            d, order = bfs(indptr, indices, s)
            if order.shape[0] < n:
                ecc[s] = np.inf
            else:
                ecc[s] = d.max()
    return ecc


@njit(cache=True, parallel=True)
def distance_matrix(indptr, indices, lengths, weighted):
    n = indptr.shape[0] - 1
    out = np.empty((n, n))
    for s in prange(n):
        if weighted:
            d, _ = dijkstra(indptr, indices, lengths, s)
            out[s, :] = d
        else:
            d, _ = bfs(indptr, indices, s)
            for t in range(n):
                out[s, t] = d[t] if d[t] >= 0 else np.inf
    return out


@njit(cache=True, parallel=True)
def four_point_delta(dm):
    """Half the largest gap between the top two pair sums over all quadruples."""
    n = dm.shape[0]
    best = np.zeros(n)
    for i in prange(n):
        b = 0.0
        for j in range(i + 1, n):
            dij = dm[i, j]
            for k in range(j + 1, n):
                dik = dm[i, k]
                djk = dm[j, k]
                for l in range(k + 1, n):
                    s1 = dij + dm[k, l]
                    s2 = dik + dm[j, l]
                    s3 = dm[i, l] + djk
                    if s1 >= s2:
                        if s2 >= s3:
                            gap = s1 - s2
                        elif s1 >= s3:
                            gap = s1 - s3
                        else:
                            gap = s3 - s1
                    else:
                        if s1 >= s3:
                            gap = s2 - s1
                        elif s2 >= s3:
                            gap = s2 - s3
                        else:
                            gap = s3 - s2
                    if gap > b:
                        b = gap
        best[i] = b
    return 0.5 * best.max() if n > 0 else 0.0
