"""Pairwise edge connectivity and the averaged minimum cut."""

from __future__ import annotations

from collections import deque

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .graph import Node, StaticGraph


class _FlowNetwork:
    """Unit-capacity arc pair per undirected edge, indexed by node position."""

    def __init__(self, g: StaticGraph):
        self.nodes = g.nodes
        self.index = {v: i for i, v in enumerate(self.nodes)}
        n = len(self.nodes)
        rows, cols = [], []
        for u, v in g.edges():
            iu, iv = self.index[u], self.index[v]
            rows += [iu, iv]
            cols += [iv, iu]
        self.capacity = csr_matrix(
            (np.ones(len(rows), dtype=np.int32), (rows, cols)), shape=(n, n)
        )
        self.capacity.sort_indices()

    def max_flow(self, s: int, t: int) -> tuple[int, np.ndarray]:
        """Flow value and a boolean mask of the source side of a minimum cut."""
        n = len(self.nodes)
        if self.capacity.nnz == 0:
            side = np.zeros(n, dtype=bool)
            side[s] = True
            return 0, side
        res = maximum_flow(self.capacity, s, t)
        residual = (self.capacity - res.flow).tocsr()
        residual.eliminate_zeros()
        side = np.zeros(n, dtype=bool)
        side[s] = True
        queue = deque([s])
        indptr, indices, data = residual.indptr, residual.indices, residual.data
        while queue:
            u = queue.popleft()
            for k in range(indptr[u], indptr[u + 1]):
                w = indices[k]
                if data[k] > 0 and not side[w]:
                    side[w] = True
                    queue.append(w)
        return int(res.flow_value), side


def min_cut(g: StaticGraph, u: Node, v: Node) -> int:
    """Minimum number of edges whose removal separates ``u`` from ``v``."""
    if u not in g or v not in g:
        raise KeyError(f"nodes {u!r}, {v!r} must both be in graph")
    if u == v:
        raise ValueError("min_cut needs two distinct nodes")
    net = _FlowNetwork(g)
    return net.max_flow(net.index[u], net.index[v])[0]


def cut_tree(g: StaticGraph) -> tuple[list, list, list]:
    """Gusfield's equivalent-flow tree.

    Returns ``(nodes, parent, weight)`` where ``parent[i]`` is the tree parent
    index of node ``i`` (``-1`` for the root) and ``weight[i]`` the min-cut
    value between ``i`` and its parent. The min cut between any two nodes is
    the smallest weight on their tree path. Needs ``n - 1`` max-flow calls.
    """
    net = _FlowNetwork(g)
    n = len(net.nodes)
    parent = [0] * n
    weight = [0] * n
    if n:
        parent[0] = -1
    for s in range(1, n):
        t = parent[s]
        value, side = net.max_flow(s, t)
        weight[s] = value
        for i in range(s + 1, n):
            if side[i] and parent[i] == t:
                parent[i] = s
    return list(net.nodes), parent, weight


def all_pairs_min_cut(g: StaticGraph) -> dict:
    """``{u: {v: MinCut(u, v)}}`` for every ordered pair of distinct nodes."""
    nodes, parent, weight = cut_tree(g)
    n = len(nodes)
    children: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for i in range(n):
        if parent[i] >= 0:
            children[i].append((parent[i], weight[i]))
            children[parent[i]].append((i, weight[i]))
    out: dict = {}
    for s in range(n):
        # bottleneck weight along the tree path from s
        best = {s: None}
        stack = [s]
        while stack:
            a = stack.pop()
            for b, w in children[a]:
                if b not in best:
                    best[b] = w if best[a] is None else min(best[a], w)
                    stack.append(b)
        out[nodes[s]] = {nodes[t]: best[t] for t in range(n) if t != s}
    return out


def averaged_min_cut(
    g: StaticGraph,
    v: Node | None = None,
    *,
    sample_cap: int | None = None,
    seed: int = 0,
) -> dict | float:
    """Mean of ``MinCut(u, v)`` over ``u != v`` (0 for a single-node graph).

    With ``v`` given returns that node's value, otherwise a dict for all
    nodes. When ``sample_cap`` is set and the graph is larger, the mean is
    taken over ``sample_cap`` partner nodes drawn uniformly with ``seed``.
    """
    if v is not None and v not in g:
        raise KeyError(f"node {v!r} not in graph")
    n = len(g)
    if n <= 1:
        return 0.0 if v is not None else dict.fromkeys(g.nodes, 0.0)
    if sample_cap is not None and n > sample_cap:
        rng = np.random.default_rng(seed)
        net = _FlowNetwork(g)
        targets = [v] if v is not None else list(g.nodes)
        result = {}
        for x in targets:
            others = [u for u in g.nodes if u != x]
            picks = rng.choice(len(others), size=sample_cap, replace=False)
            total = sum(net.max_flow(net.index[x], net.index[others[i]])[0] for i in sorted(picks))
            result[x] = total / sample_cap
        return result[v] if v is not None else result
    cuts = all_pairs_min_cut(g)
    means = {x: sum(row.values()) / (n - 1) for x, row in cuts.items()}
    return means[v] if v is not None else means
