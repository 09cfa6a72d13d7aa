"""Shortest-path based measures: distances, betweenness, closeness, eccentricity."""

from __future__ import annotations

from collections import deque

from .graph import Node, StaticGraph, edge_key


def bfs_distances(g: StaticGraph, v: Node) -> dict:
    """Hop distances from ``v`` to every node reachable from it."""
    if v not in g:
        raise KeyError(f"node {v!r} not in graph")
    dist = {v: 0}
    queue = deque([v])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in g.neighbors(u):
            if w not in dist:
                dist[w] = du
                queue.append(w)
    return dist


def _brandes_source(g: StaticGraph, s: Node):
    """Single-source shortest-path DAG: visit order, predecessors, path counts."""
    order = []
    preds: dict = {s: []}
    sigma = {s: 1}
    dist = {s: 0}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        order.append(u)
        du = dist[u]
        for w in g.neighbors(u):
            if w not in dist:
                dist[w] = du + 1
                sigma[w] = 0
                preds[w] = []
                queue.append(w)
            if dist[w] == du + 1:
                sigma[w] += sigma[u]
                preds[w].append(u)
    return order, preds, sigma


def _brandes(g: StaticGraph) -> tuple[dict, dict]:
    node_bc = dict.fromkeys(g.nodes, 0.0)
    edge_bc = {edge_key(u, v): 0.0 for u, v in g.edges()}
    for s in g.nodes:
        order, preds, sigma = _brandes_source(g, s)
        delta = dict.fromkeys(order, 0.0)
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for u in preds[w]:
                c = sigma[u] * coeff
                edge_bc[edge_key(u, w)] += c
                delta[u] += c
            if w != s:
                node_bc[w] += delta[w]
    # every unordered pair was accumulated once from each endpoint
    for v in node_bc:
        node_bc[v] /= 2.0
    for e in edge_bc:
        edge_bc[e] /= 2.0
    return node_bc, edge_bc


def betweenness_centrality(g: StaticGraph) -> dict:
    """Unnormalized node betweenness summed over unordered source/target pairs."""
    return _brandes(g)[0]


def edge_betweenness(g: StaticGraph) -> dict:
    """Edge betweenness over unordered pairs, keyed by :func:`edge_key`."""
    return _brandes(g)[1]


def incident_edge_betweenness(g: StaticGraph, v: Node, edge_bc: dict | None = None) -> float:
    """Mean betweenness of the edges incident to ``v`` (0 for isolated nodes)."""
    nbrs = g.neighbors(v)
    if not nbrs:
        return 0.0
    if edge_bc is None:
        edge_bc = edge_betweenness(g)
    return sum(edge_bc[edge_key(v, w)] for w in nbrs) / len(nbrs)


def closeness_centrality(g: StaticGraph, v: Node) -> float:
    """Inverse distance sum over ``v``'s component; 0 when ``v`` is alone."""
    total = sum(bfs_distances(g, v).values())
    return 1.0 / total if total > 0 else 0.0


def eccentricity(g: StaticGraph, v: Node) -> int:
    return max(bfs_distances(g, v).values())


def avg_neighbor_degree(g: StaticGraph, v: Node) -> float:
    nbrs = g.neighbors(v)
    if not nbrs:
        return 0.0
    return sum(g.degree(u) for u in nbrs) / len(nbrs)
