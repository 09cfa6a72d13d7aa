"""Per-node measure table used as cascade features."""

from __future__ import annotations

import csv
from dataclasses import astuple, dataclass, fields
from pathlib import Path

from .cores import k_core_decomposition
from .flow import averaged_min_cut
from .graph import StaticGraph, edge_key
from .paths import _brandes, bfs_distances
from .spectral import eigenvector_centrality


@dataclass(frozen=True)
class NodeMeasures:
    degree: int
    betweenness: float
    closeness: float
    coreness: int
    eccentricity: int
    avg_min_cut: float
    eigenvector: float
    incident_edge_betweenness: float
    avg_neighbor_degree: float

    def as_vector(self) -> list[float]:
        return [float(x) for x in astuple(self)]


FEATURE_NAMES: tuple[str, ...] = tuple(f.name for f in fields(NodeMeasures))


@dataclass(frozen=True)
class MeasureConfig:
    eigen_tol: float = 1e-10
    eigen_max_iter: int = 10000
    min_cut_sample_cap: int | None = None
    seed: int = 0


def node_measures(g: StaticGraph, config: MeasureConfig | None = None) -> dict:
    """All measures for every node of ``g``."""
    config = config or MeasureConfig()
    node_bc, edge_bc = _brandes(g)
    core = k_core_decomposition(g)
    cuts = averaged_min_cut(g, sample_cap=config.min_cut_sample_cap, seed=config.seed)
    if g.number_of_edges():
        evec = eigenvector_centrality(g, tol=config.eigen_tol, max_iter=config.eigen_max_iter)
    else:
        evec = dict.fromkeys(g.nodes, 0.0)

    out = {}
    for v in g.nodes:
        dist = bfs_distances(g, v)
        total = sum(dist.values())
        nbrs = g.neighbors(v)
        deg = len(nbrs)
        out[v] = NodeMeasures(
            degree=deg,
            betweenness=node_bc[v],
            closeness=1.0 / total if total else 0.0,
            coreness=core[v],
            eccentricity=max(dist.values()),
            avg_min_cut=cuts[v],
            eigenvector=evec[v],
            incident_edge_betweenness=(
                sum(edge_bc[edge_key(v, w)] for w in nbrs) / deg if deg else 0.0
            ),
            avg_neighbor_degree=sum(g.degree(w) for w in nbrs) / deg if deg else 0.0,
        )
    return out


def write_measures_csv(path: Path, measures: dict) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("node",) + FEATURE_NAMES)
        for v, m in measures.items():
            w.writerow((v,) + tuple(repr(x) if isinstance(x, float) else x for x in astuple(m)))


def read_measures_csv(path: Path, parse_node=int) -> dict:
    out = {}
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            out[parse_node(row["node"])] = NodeMeasures(
                degree=int(row["degree"]),
                betweenness=float(row["betweenness"]),
                closeness=float(row["closeness"]),
                coreness=int(row["coreness"]),
                eccentricity=int(row["eccentricity"]),
                avg_min_cut=float(row["avg_min_cut"]),
                eigenvector=float(row["eigenvector"]),
                incident_edge_betweenness=float(row["incident_edge_betweenness"]),
                avg_neighbor_degree=float(row["avg_neighbor_degree"]),
            )
    return out
