"""Shared builders for hand-made fixtures."""

from decaycascade.cascade import CascadeTree
from decaycascade.graphcore import StaticGraph
from decaycascade.ingest import SnapshotSeries


def series_from_last_seen(g0: StaticGraph, last_seen: dict, k: int) -> SnapshotSeries:
    """Snapshot t keeps the G_0 edges whose endpoints both have last_seen >= t."""
    snaps = [g0]
    for t in range(1, k):
        active = [v for v in g0.nodes if last_seen[v] >= t]
        snaps.append(g0.subgraph(active))
    return SnapshotSeries(tuple(snaps), 1, 0, dict(last_seen))


def tree(edges, root=None, last_seen=None, cid=0) -> CascadeTree:
    """Tree from (parent, child) pairs; last_seen defaults to depth + 1."""
    edges = tuple(edges)
    if root is None:
        root = edges[0][0]
    nodes = {root} | {v for e in edges for v in e}
    if last_seen is None:
        last_seen = {root: 1}
        pending = list(edges)
        while pending:
            for e in list(pending):
                if e[0] in last_seen:
                    last_seen[e[1]] = last_seen[e[0]] + 1
                    pending.remove(e)
    return CascadeTree(cid, root, frozenset(nodes), edges, dict(last_seen))


def signal_cascades(n: int, seed: int, noise: float = 2.0):
    """Star cascades whose size is a noisy increasing function of initiator degree + coreness.

    Returns (trees, measures); the other seven measures are independent noise.
    """
    import numpy as np

    from decaycascade.graphcore import NodeMeasures

    rng = np.random.default_rng(seed)
    trees, measures = [], {}
    next_id = n
    for i in range(n):
        deg = int(rng.poisson(8)) + 1
        core = int(min(deg, rng.integers(1, 10)))
        size = max(1, int(round(2 * deg + 3 * core + rng.normal(0, noise))))
        measures[i] = NodeMeasures(
            degree=deg,
            betweenness=float(rng.random() * 100),
            closeness=float(rng.random()),
            coreness=core,
            eccentricity=int(rng.integers(1, 8)),
            avg_min_cut=float(rng.random() * 5),
            eigenvector=float(rng.random()),
            incident_edge_betweenness=float(rng.random() * 50),
            avg_neighbor_degree=float(rng.random() * 10),
        )
        leaves = list(range(next_id, next_id + size - 1))
        next_id += size - 1
        last_seen = {i: 1, **{v: 2 for v in leaves}}
        trees.append(CascadeTree(i, i, frozenset(last_seen), tuple((i, v) for v in leaves), last_seen))
    return trees, measures
