"""Static graph type and the node-level network measures."""

from .cores import k_core_decomposition
from .flow import all_pairs_min_cut, averaged_min_cut, cut_tree, min_cut
from .graph import StaticGraph, edge_key, node_key, sorted_nodes
from .measures import (
    FEATURE_NAMES,
    MeasureConfig,
    NodeMeasures,
    node_measures,
    read_measures_csv,
    write_measures_csv,
)
from .paths import (
    avg_neighbor_degree,
    betweenness_centrality,
    bfs_distances,
    closeness_centrality,
    eccentricity,
    edge_betweenness,
    incident_edge_betweenness,
)
from .spectral import ConvergenceError, eigenvector_centrality

__all__ = [
    "FEATURE_NAMES",
    "ConvergenceError",
    "MeasureConfig",
    "NodeMeasures",
    "StaticGraph",
    "all_pairs_min_cut",
    "avg_neighbor_degree",
    "averaged_min_cut",
    "betweenness_centrality",
    "bfs_distances",
    "closeness_centrality",
    "cut_tree",
    "eccentricity",
    "edge_betweenness",
    "edge_key",
    "eigenvector_centrality",
    "incident_edge_betweenness",
    "k_core_decomposition",
    "min_cut",
    "node_key",
    "node_measures",
    "read_measures_csv",
    "sorted_nodes",
    "write_measures_csv",
]
