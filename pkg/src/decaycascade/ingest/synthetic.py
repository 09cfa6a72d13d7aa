"""Random decay series with planted inactivity cascades, for testing extraction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..graphcore.graph import StaticGraph, edge_key
from .snapshots import SnapshotSeries


@dataclass(frozen=True)
class PlantedSpec:
    root: int
    children: int
    depth: int

    @property
    def size(self) -> int:
        return sum(self.children**level for level in range(self.depth + 1))


@dataclass(frozen=True)
class PlantedTree:
    root: int
    nodes: frozenset
    edges: frozenset  # (parent, child)
    levels: dict


@dataclass(frozen=True)
class SyntheticDecay:
    series: SnapshotSeries
    planted: tuple[PlantedTree, ...]


def generate_synthetic_decay(
    n: int,
    p_edge: float,
    planted: list[tuple[int, int, int] | PlantedSpec],
    k: int,
    seed: int,
) -> SyntheticDecay:
    """Erdos-Renyi ``G_0`` over ``range(n)`` with planted cascade trees.

    Each planted tree is a complete ``children``-ary tree of the given depth
    rooted at ``root``; its level-``l`` nodes get last activity ``l + 1`` and
    every other node stays active to the end (``k - 1``). Non-root tree nodes
    are drawn from the unused ids with the seeded generator. Later snapshots
    keep the ``G_0`` edges among still-active nodes, and any node that would
    have no edge in its last-activity snapshot is paired with a random
    still-active partner there.
    """
    specs = [s if isinstance(s, PlantedSpec) else PlantedSpec(*s) for s in planted]
    if not 0 <= p_edge <= 1:
        raise ValueError("p_edge must be a probability")
    if k < 2:
        raise ValueError("k must be at least 2")
    roots = [s.root for s in specs]
    if len(set(roots)) != len(roots):
        raise ValueError("planted trees share nodes (duplicate roots)")
    for s in specs:
        if not 0 <= s.root < n:
            raise ValueError(f"root {s.root} outside range({n})")
        if s.children < 1 or s.depth < 0:
            raise ValueError("planted trees need children >= 1 and depth >= 0")
        if s.depth + 2 > k - 1:
            raise ValueError(f"depth {s.depth} needs k >= {s.depth + 3} so the deepest level decays before the end")
    used = sum(s.size for s in specs)
    if used > n - 2:
        raise ValueError(f"planted trees need {used} nodes plus two survivors, only {n} available")

    rng = np.random.default_rng(seed)
    pool = [v for v in range(n) if v not in set(roots)]
    pool = [pool[i] for i in rng.permutation(len(pool))]

    last_seen = dict.fromkeys(range(n), k - 1)
    trees = []
    forced: set = set()
    for s in specs:
        levels = {s.root: 0}
        edges = set()
        frontier = [s.root]
        for level in range(1, s.depth + 1):
            nxt = []
            for parent in frontier:
                for _ in range(s.children):
                    child = pool.pop()
                    levels[child] = level
                    edges.add((parent, child))
                    nxt.append(child)
            frontier = nxt
        for v, level in levels.items():
            last_seen[v] = level + 1
        forced |= {edge_key(u, v) for u, v in edges}
        trees.append(PlantedTree(s.root, frozenset(levels), frozenset(edges), levels))

    upper = np.triu(rng.random((n, n)) < p_edge, k=1)
    g0_edges = {(int(u), int(v)) for u, v in zip(*np.nonzero(upper))} | forced

    snapshots = [StaticGraph(range(n), g0_edges)]
    for t in range(1, k):
        active = [v for v in range(n) if last_seen[v] >= t]
        active_set = set(active)
        edges = {e for e in g0_edges if e[0] in active_set and e[1] in active_set}
        touched = {v for e in edges for v in e}
        for v in active:
            if last_seen[v] == t and v not in touched:
                partners = [u for u in active if u != v]
                u = partners[int(rng.integers(len(partners)))]
                edges.add(edge_key(u, v))
                touched |= {u, v}
        snapshots.append(StaticGraph((), edges))

    # every node's last edge must land exactly in its assigned snapshot
    observed = {}
    for t, g in enumerate(snapshots):
        for v in g.nodes:
            if g.degree(v):
                observed[v] = t
    assert observed == last_seen, "synthetic series violates its own activity schedule"
    return SyntheticDecay(SnapshotSeries(tuple(snapshots), 1, 0, last_seen), tuple(trees))
