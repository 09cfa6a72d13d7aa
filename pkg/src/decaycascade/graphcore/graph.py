"""Immutable undirected simple graph."""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Mapping
from typing import Any

Node = Hashable


def node_key(v: Any) -> tuple:
    """Sort key that orders ints numerically and strings lexically, ints first."""
    return (isinstance(v, str), v)


def sorted_nodes(nodes: Iterable[Node]) -> list:
    return sorted(nodes, key=node_key)


class StaticGraph:
    """Undirected graph without self-loops or parallel edges.

    Adjacency lists are stored as tuples sorted with :func:`node_key` so every
    traversal is deterministic.
    """

    __slots__ = ("_adj", "_nodes", "_n_edges")

    def __init__(self, nodes: Iterable[Node] = (), edges: Iterable[tuple[Node, Node]] = ()):
        adj: dict[Node, set] = {v: set() for v in nodes}
        for u, v in edges:
            if u == v:
                continue
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        self._nodes = tuple(sorted_nodes(adj))
        self._adj = {v: tuple(sorted_nodes(adj[v])) for v in self._nodes}
        self._n_edges = sum(len(a) for a in self._adj.values()) // 2

    @classmethod
    def from_adjacency(cls, adjacency: Mapping[Node, Iterable[Node]]) -> "StaticGraph":
        return cls(adjacency, ((u, v) for u, nbrs in adjacency.items() for v in nbrs))

    @property
    def nodes(self) -> tuple:
        return self._nodes

    def __len__(self) -> int:
        return len(self._nodes)

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __iter__(self):
        return iter(self._nodes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StaticGraph):
            return NotImplemented
        return self._adj == other._adj

    def __hash__(self) -> int:
        return hash(tuple(self._adj.items()))

    def __repr__(self) -> str:
        return f"StaticGraph(n={len(self)}, m={self.number_of_edges()})"

    def neighbors(self, v: Node) -> tuple:
        try:
            return self._adj[v]
        except KeyError:
            raise KeyError(f"node {v!r} not in graph") from None

    def degree(self, v: Node) -> int:
        return len(self.neighbors(v))

    def has_edge(self, u: Node, v: Node) -> bool:
        nbrs = self._adj.get(u)
        return nbrs is not None and v in nbrs

    def number_of_edges(self) -> int:
        return self._n_edges

    def edges(self) -> list[tuple]:
        """Each undirected edge once, as ``(u, v)`` with ``u`` before ``v`` in node order."""
        index = {v: i for i, v in enumerate(self._nodes)}
        return [(u, v) for u in self._nodes for v in self._adj[u] if index[u] < index[v]]

    def subgraph(self, keep: Iterable[Node]) -> "StaticGraph":
        keep = set(keep)
        return StaticGraph(
            (v for v in self._nodes if v in keep),
            ((u, v) for u, v in self.edges() if u in keep and v in keep),
        )

    def connected_components(self) -> list[list]:
        """Components as sorted node lists, ordered by their smallest node."""
        seen: set = set()
        comps = []
        for s in self._nodes:
            if s in seen:
                continue
            seen.add(s)
            stack, comp = [s], [s]
            while stack:
                u = stack.pop()
                for w in self._adj[u]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
                        comp.append(w)
            comps.append(sorted_nodes(comp))
        return comps

    def relabel(self, mapping: Mapping[Node, Node]) -> "StaticGraph":
        return StaticGraph((mapping[v] for v in self._nodes), ((mapping[u], mapping[v]) for u, v in self.edges()))


def edge_key(u: Node, v: Node) -> tuple:
    """Canonical undirected edge key."""
    return (u, v) if node_key(u) <= node_key(v) else (v, u)
