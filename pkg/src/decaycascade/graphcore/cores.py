"""k-core decomposition by minimum-degree peeling."""

from __future__ import annotations

from .graph import StaticGraph


def k_core_decomposition(g: StaticGraph) -> dict:
    """Coreness of every node.

    Bucket-queue peeling (Batagelj & Zaversnik): repeatedly remove a node of
    minimum remaining degree; its coreness is the running maximum of the
    degrees seen at removal time.
    """
    degree = {v: g.degree(v) for v in g.nodes}
    if not degree:
        return {}
    buckets: list[dict] = [dict() for _ in range(max(degree.values()) + 1)]
    for v in g.nodes:
        buckets[degree[v]][v] = None  # dict as an insertion-ordered set
    core = {}
    k = 0
    d = 0
    for _ in range(len(degree)):
        while not buckets[d]:
            d += 1
        v = next(iter(buckets[d]))
        del buckets[d][v]
        k = max(k, d)
        core[v] = k
        for w in g.neighbors(v):
            if w in core:
                continue
            dw = degree[w]
            if dw > d:
                del buckets[dw][w]
                degree[w] = dw - 1
                buckets[dw - 1][w] = None
        # a neighbour may now sit one bucket below d
        d = max(d - 1, 0)
    return core
