from collections import Counter

import numpy as np
import pytest

from congestion_lab.generators import (
    GeneratorError,
    GeneratorSpec,
    face_cycles,
    gen_bridged_grids,
    gen_grid,
    gen_hpq,
    gen_random_regular,
    gen_regular_tree,
    gen_sphere_wired,
    gen_tree_cross_z,
)
from congestion_lab.graph import Graph, degree_stats, is_connected, to_json


def layer_sizes(g):
    c = Counter(g.layer)
    return [c[i] for i in range(max(c) + 1)]


class TestRegularTree:
    def test_k3_n2(self):
        g = gen_regular_tree(3, 2)
        assert g.n == 10 and layer_sizes(g) == [1, 3, 6]

    def test_single_node(self):
        assert gen_regular_tree(5, 0).n == 1

    def test_k4_n3(self):
        assert gen_regular_tree(4, 3).n == 1 + 4 + 12 + 36

    @pytest.mark.parametrize("k,n", [(3, 5), (5, 3), (7, 2)])
    def test_sphere_sizes(self, k, n):
        assert layer_sizes(gen_regular_tree(k, n))[1:] == [k * (k - 1) ** (p - 1) for p in range(1, n + 1)]

    def test_k_too_small(self):
        with pytest.raises(GeneratorError):
            gen_regular_tree(2, 3)


def _degree_face_audit(g, p, q, n):
    for v in range(g.n):
        if g.layer[v] < n:
            assert g.degree(v) == q
    faces = face_cycles(g)
    outer = [f for f in faces if len(f) != p]
    assert len(outer) <= 1
    return faces


class TestHpq:
    def test_37_radius_one(self):
        g = gen_hpq(3, 7, 1)
        assert g.n == 8 and g.degree(0) == 7
        ring = [v for v in range(1, 8)]
        for v in ring:
            assert sum(g.has_edge(v, w) for w in ring) == 2
        faces = face_cycles(g)
        assert Counter(len(f) for f in faces) == {3: 7, 7: 1}

    def test_single_node(self):
        assert gen_hpq(4, 5, 0).n == 1

    def test_37_layers_follow_recurrence(self):
        sizes = layer_sizes(gen_hpq(3, 7, 8))
        assert sizes[1] == 7
        # fit a on layers 1..3; the recurrence starts once the center is left behind
        a = (sizes[3] + sizes[1]) // sizes[2]
        assert a * sizes[2] - sizes[1] == sizes[3]
        for k in range(3, 8):
            assert sizes[k + 1] == a * sizes[k] - sizes[k - 1]

    @pytest.mark.parametrize("p,q,n", [(3, 7, 5), (4, 5, 4), (5, 4, 4), (7, 3, 6), (3, 8, 3), (6, 4, 3)])
    def test_degree_and_face_audit(self, p, q, n):
        _degree_face_audit(gen_hpq(p, q, n), p, q, n)

    @pytest.mark.parametrize("p,q,n", [(3, 7, 6), (4, 5, 5), (7, 3, 6)])
    def test_euler_characteristic(self, p, q, n):
        g = gen_hpq(p, q, n)
        assert g.n - g.edge_count + len(face_cycles(g)) == 2

    @pytest.mark.parametrize("p,q", [(3, 6), (4, 4), (6, 3), (3, 3), (2, 9)])
    def test_non_hyperbolic_rejected(self, p, q):
        with pytest.raises(GeneratorError):
            gen_hpq(p, q, 2)

    def test_canonical_numbering_is_spiral(self):
        g = gen_hpq(3, 7, 4)
        assert list(g.layer) == sorted(g.layer)
        assert g.rotation[0][0] == 1


class TestSphereWired:
    def test_degrees(self):
        g = gen_sphere_wired(4, 3, seed=5)
        for v in range(g.n):
            # |S_1| = k, so the first sphere is K_4 and adds only 3
            expected = {0: 4, 1: 4 + 3, 2: 8, 3: 5}[g.layer[v]]
            assert g.degree(v) == expected
        assert degree_stats(g)[1] == 8

    def test_first_sphere_complete_fallback(self):
        g = gen_sphere_wired(3, 1, seed=0)
        assert g.edge_count == 3 + 3

    def test_handshake(self):
        g = gen_sphere_wired(3, 2, seed=2)
        assert g.edge_count - gen_regular_tree(3, 2).edge_count - 3 == 9

    def test_removing_sphere_edges_recovers_tree(self):
        g = gen_sphere_wired(5, 3, seed=9)
        tree_edges = tuple(e for e in g.edges if g.layer[e[0]] != g.layer[e[1]])
        assert Graph(g.n, tree_edges, root=0, family="regular_tree").edges == gen_regular_tree(5, 3).edges

    def test_deterministic(self):
        assert to_json(gen_sphere_wired(6, 3, 42)) == to_json(gen_sphere_wired(6, 3, 42))
        assert to_json(gen_sphere_wired(6, 3, 42)) != to_json(gen_sphere_wired(6, 3, 43))

    def test_seed_required(self):
        with pytest.raises(GeneratorError):
            gen_sphere_wired(3, 2, None)


class TestLattices:
    @pytest.mark.parametrize("dim,L,N,E", [(2, 3, 9, 12), (1, 6, 6, 5), (3, 4, 64, 144)])
    def test_grid_counts(self, dim, L, N, E):
        g = gen_grid(dim, L)
        assert (g.n, g.edge_count) == (N, E)

    def test_grid_root_is_center(self):
        g = gen_grid(2, 5)
        assert max(g.layer) == 4

    def test_grid_rotation_is_planar(self):
        g = gen_grid(2, 4)
        assert g.n - g.edge_count + len(face_cycles(g)) == 2

    @pytest.mark.parametrize("n,N", [(0, 1), (1, 6), (2, 20)])
    def test_tree_cross_z_counts(self, n, N):
        assert gen_tree_cross_z(n).n == N

    def test_tree_cross_z_brute_force_count(self):
        n = 3
        tree_ball = lambda m: 1 + sum(3 * 2 ** (p - 1) for p in range(1, m + 1))
        assert gen_tree_cross_z(n).n == sum(tree_ball(n - abs(z)) for z in range(-n, n + 1))

    @pytest.mark.parametrize("L,N,E", [(2, 8, 9), (3, 18, 25)])
    def test_bridged_counts(self, L, N, E):
        g = gen_bridged_grids(L)
        assert (g.n, g.edge_count) == (N, E)

    def test_bridge_endpoints_are_the_cut_vertices(self):
        import networkx as nx

        from conftest import to_nx

        g = gen_bridged_grids(4)
        a = g.root
        b = next(w for w in g.neighbors(a) if w >= 16)
        assert set(nx.articulation_points(to_nx(g))) == {a, b}


class TestRandomRegular:
    def test_handshake(self):
        g = gen_random_regular(3, 10, seed=1)
        assert g.edge_count == 15 and degree_stats(g)[:2] == (3, 3)

    def test_parity_error(self):
        with pytest.raises(GeneratorError):
            gen_random_regular(3, 5, seed=1)

    def test_connectivity_is_reported_not_assumed(self):
        connected = sum(is_connected(gen_random_regular(4, 100, seed=s)) for s in range(100))
        assert connected >= 95

    def test_deterministic(self):
        assert gen_random_regular(3, 50, 7).edges == gen_random_regular(3, 50, 7).edges


class TestGeneratorSpec:
    def test_build(self):
        assert GeneratorSpec("grid", {"q_dim": 2, "L": 3}).build().n == 9

    def test_unknown_family(self):
        with pytest.raises(GeneratorError):
            GeneratorSpec("torus", {})

    def test_missing_param(self):
        with pytest.raises(GeneratorError):
            GeneratorSpec("hpq", {"p": 3}).build()

    def test_random_family_needs_seed(self):
        with pytest.raises(GeneratorError):
            GeneratorSpec("random_regular", {"r": 3, "N": 10})
