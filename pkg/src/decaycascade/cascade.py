"""Inactivity cascade extraction, cascade paths and coreness monotonicity."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Hashable, Iterable, Mapping

from .graphcore.cores import k_core_decomposition
from .graphcore.graph import StaticGraph, node_key, sorted_nodes
from .ingest.events import parse_node_id
from .ingest.snapshots import SnapshotSeries


class InitiatorMode(str, enum.Enum):
    EARLIEST = "earliest"  # every node on the earliest decayed level
    LOCAL = "local"  # decays while all of its neighbours are still active


@dataclass(frozen=True)
class CascadeTree:
    id: int
    root: Hashable
    nodes: frozenset
    edges: tuple  # (parent, child), in insertion order
    last_seen_of: Mapping

    @property
    def size(self) -> int:
        return len(self.nodes)

    def children(self) -> dict:
        out: dict = {v: [] for v in self.nodes}
        for p, c in self.edges:
            out[p].append(c)
        return out

    def skeleton(self) -> StaticGraph:
        return StaticGraph(self.nodes, self.edges)

    def validate(self, g0: StaticGraph | None = None) -> None:
        """Raise ``ValueError`` if this is not a rooted inactivity tree."""
        if self.root not in self.nodes:
            raise ValueError("root not among the nodes")
        if len(self.edges) != len(self.nodes) - 1:
            raise ValueError("a tree needs |E| = |V| - 1")
        parents: dict = {}
        for p, c in self.edges:
            if p not in self.nodes or c not in self.nodes:
                raise ValueError(f"edge ({p!r}, {c!r}) leaves the node set")
            if c in parents:
                raise ValueError(f"node {c!r} has two parents")
            parents[c] = p
            if g0 is not None and not g0.has_edge(p, c):
                raise ValueError(f"edge ({p!r}, {c!r}) not in G_0")
            tp, tc = self.last_seen_of[p], self.last_seen_of[c]
            if tp > tc or (tp == tc and tp != self.last_seen_of[self.root]):
                raise ValueError(f"edge ({p!r}, {c!r}) runs against inactivity order")
        if self.root in parents:
            raise ValueError("root has a parent")
        for v in self.nodes:
            seen = set()
            while v != self.root:
                if v in seen or v not in parents:
                    raise ValueError("edges do not form a tree rooted at the initiator")
                seen.add(v)
                v = parents[v]
        if min(self.last_seen_of[v] for v in self.nodes) != self.last_seen_of[self.root]:
            raise ValueError("root is not among the earliest decayed nodes")


def _initiators(g0: StaticGraph, last_seen: Mapping, candidates: list, mode: InitiatorMode) -> list:
    first = min(last_seen[v] for v in candidates)
    earliest = [v for v in candidates if last_seen[v] == first]
    if mode is InitiatorMode.EARLIEST:
        return earliest
    local = [v for v in candidates if all(last_seen[u] > last_seen[v] for u in g0.neighbors(v))]
    # no node decays ahead of all its neighbours: fall back to one earliest node
    return local or earliest[:1]


def extract_cascades(
    g0: StaticGraph,
    series: SnapshotSeries,
    include_alive: bool = False,
    initiator_mode: InitiatorMode | str = InitiatorMode.EARLIEST,
) -> list[CascadeTree]:
    """One cascade tree per initiator, grown over ``G_0``.

    For initiator ``v``: adjacent initiators are linked to ``v``; then every
    later-decayed node ``u`` (in ``(last_seen, id)`` order) is linked to ``v`` when
    adjacent, otherwise attached to its first in-tree neighbour that decayed
    strictly earlier, ordered by ``(last_seen, id)``. Attaching to a single
    neighbour keeps triangles out of the tree. A node may sit in several
    cascades.
    """
    if series.k < 2:
        raise ValueError("cascade extraction needs k >= 2")
    mode = InitiatorMode(initiator_mode)
    last_seen = series.last_activity
    candidates = [v for v in g0.nodes if v in last_seen and (include_alive or last_seen[v] != series.k - 1)]
    if not candidates:
        return []

    def order(v):
        return (last_seen[v], node_key(v))

    initiators = sorted(_initiators(g0, last_seen, candidates, mode), key=order)
    initiator_set = set(initiators)
    followers = sorted((v for v in candidates if v not in initiator_set), key=order)

    trees = []
    for cid, v in enumerate(initiators):
        members = {v: None}
        edges = []
        for q in initiators:
            if q != v and g0.has_edge(v, q):
                members[q] = None
                edges.append((v, q))
        for u in followers:
            if last_seen[u] <= last_seen[v]:
                continue
            if g0.has_edge(v, u):
                members[u] = None
                edges.append((v, u))
                continue
            hosts = [w for w in g0.neighbors(u) if w in members and last_seen[w] < last_seen[u]]
            if hosts:
                w = min(hosts, key=order)
                members[u] = None
                edges.append((w, u))
        trees.append(
            CascadeTree(
                id=cid,
                root=v,
                nodes=frozenset(members),
                edges=tuple(edges),
                last_seen_of={w: last_seen[w] for w in members},
            )
        )
    return trees


class Monotonicity(str, enum.Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    NONMONOTONE = "nonmonotone"


@dataclass(frozen=True)
class CascadePath:
    nodes: tuple
    coreness_seq: tuple = ()


def cascade_paths(tree: CascadeTree, coreness: Mapping | None = None) -> list[CascadePath]:
    """Root-to-leaf paths, one per leaf, in depth-first order over sorted children."""
    children = tree.children()
    for kids in children.values():
        kids.sort(key=node_key)
    paths = []
    stack = [(tree.root,)]
    while stack:
        path = stack.pop()
        kids = children[path[-1]]
        if not kids:
            seq = tuple(coreness[v] for v in path) if coreness is not None else ()
            paths.append(CascadePath(path, seq))
        for c in reversed(kids):
            stack.append(path + (c,))
    return paths


def classify_monotonicity(path: CascadePath | Iterable) -> Monotonicity:
    seq = list(path.coreness_seq if isinstance(path, CascadePath) else path)
    steps = [b - a for a, b in zip(seq, seq[1:])]
    if steps and all(s >= 0 for s in steps) and any(s > 0 for s in steps):
        return Monotonicity.INCREASING
    if steps and all(s <= 0 for s in steps) and any(s < 0 for s in steps):
        return Monotonicity.DECREASING
    return Monotonicity.NONMONOTONE


def monotonicity_profile(trees: Iterable[CascadeTree], coreness: Mapping) -> dict:
    """Fractions of root-to-leaf paths per monotonicity class."""
    counts = dict.fromkeys(Monotonicity, 0)
    for tree in trees:
        for path in cascade_paths(tree, coreness):
            counts[classify_monotonicity(path)] += 1
    total = sum(counts.values())
    if total == 0:
        raise ValueError("monotonicity profile needs at least one path")
    return {m.value: c / total for m, c in counts.items()}


def initiator_coreness_split(g0: StaticGraph, trees: Iterable[CascadeTree]) -> tuple[list, list]:
    """Coreness of initiators versus every other node of ``G_0``."""
    core = k_core_decomposition(g0)
    roots = {t.root for t in trees}
    inits = [core[v] for v in g0.nodes if v in roots]
    rest = [core[v] for v in g0.nodes if v not in roots]
    return inits, rest


def write_cascades_jsonl(path: Path, trees: Iterable[CascadeTree]) -> None:
    with open(path, "w") as fh:
        for t in trees:
            rec = {
                "id": t.id,
                "root": t.root,
                "edges": [list(e) for e in t.edges],
                "nodes": sorted_nodes(t.nodes),
                "last_seen": {str(v): t.last_seen_of[v] for v in sorted_nodes(t.nodes)},
            }
            fh.write(json.dumps(rec) + "\n")


def read_cascades_jsonl(path: Path) -> list[CascadeTree]:
    trees = []
    with open(path) as fh:
        for line in fh:
            rec = json.loads(line)
            last_seen = {parse_node_id(k): v for k, v in rec["last_seen"].items()}
            trees.append(
                CascadeTree(
                    id=rec["id"],
                    root=rec["root"],
                    nodes=frozenset(last_seen),
                    edges=tuple((p, c) for p, c in rec["edges"]),
                    last_seen_of=last_seen,
                )
            )
    return trees


def write_cascades_dot(path: Path, trees: Iterable[CascadeTree]) -> None:
    """GraphViz digraph; node labels carry the last-activity index."""
    lines = ["digraph cascades {"]
    for t in trees:
        lines.append(f"  subgraph cluster_{t.id} {{")
        lines.append(f'    label="cascade {t.id}";')
        for v in sorted_nodes(t.nodes):
            lines.append(f'    "c{t.id}_{v}" [label="{v}", last_seen={t.last_seen_of[v]}];')
        for p, c in t.edges:
            lines.append(f'    "c{t.id}_{p}" -> "c{t.id}_{c}";')
        lines.append("  }")
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n")
