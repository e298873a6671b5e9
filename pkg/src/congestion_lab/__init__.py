"""Geodesic congestion scaling on small-world graph families."""

from .analysis import (
    CutCertificate,
    ScalingFit,
    bollobas_bound,
    construction_exponent,
    delta_hyperbolicity,
    fit_scaling,
    geodesic_spanning_tree,
    lemma_upper_bound,
    theorem1_bound,
    wedge_cut,
)
from .generators import (
    GeneratorError,
    GeneratorSpec,
    gen_bridged_grids,
    gen_grid,
    gen_hpq,
    gen_random_regular,
    gen_regular_tree,
    gen_sphere_wired,
    gen_tree_cross_z,
)
from .graph import (
    DisconnectedGraphError,
    Graph,
    GraphError,
    SsspResult,
    ball,
    bfs_sssp,
    degree_stats,
    diameter,
    dijkstra_sssp,
    from_json,
    sphere,
    to_json,
)
from .load import LoadProfile, brute_force_load, geodesic_load
from .remetrize import WeightScheme, apply_weights, check_triangle, distance_distortion

__version__ = "0.1.0"
