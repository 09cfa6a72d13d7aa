"""Cascade-level measures: size, duration, virality, degree, similarity."""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .cascade import CascadeTree
from .graphcore.graph import StaticGraph
from .graphcore.paths import bfs_distances


class SigmoidMode(str, enum.Enum):
    LOGISTIC = "logistic"
    TANH = "tanh"
    MINMAX = "minmax"


class DegreeBase(str, enum.Enum):
    TREE = "tree"  # tree-internal degree over |V_tree| - 1
    G0 = "g0"  # G_0 degree over the maximum degree of G_0


@dataclass(frozen=True)
class CascadeMetrics:
    cascade_id: int
    size: int
    size_fraction: float
    duration: float
    virality_raw: float
    virality_norm: float
    max_degree_norm: float


def cascade_size(tree: CascadeTree) -> int:
    return len(tree.nodes)


def size_fraction(tree: CascadeTree, g0: StaticGraph) -> float:
    return len(tree.nodes) / len(g0)


def cascade_duration(tree: CascadeTree, k: int) -> float:
    """Mean last-activity gap over the tree's edges, divided by ``k``.

    A single-node cascade has no edges and is given duration 0.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if not tree.edges:
        return 0.0
    gaps = sum(tree.last_seen_of[c] - tree.last_seen_of[p] for p, c in tree.edges)
    return gaps / (k * len(tree.edges))


def cascade_virality(tree: CascadeTree) -> float:
    """Mean hop distance over ordered node pairs of the tree (Wiener index / n(n-1))."""
    n = len(tree.nodes)
    if n < 2:
        return 0.0
    g = tree.skeleton()
    total = sum(sum(bfs_distances(g, v).values()) for v in g.nodes)
    return total / (n * (n - 1))


def normalize_virality(values: Sequence[float], mode: SigmoidMode | str = SigmoidMode.LOGISTIC) -> list[float]:
    """Squash a sample into (0, 1) preserving order.

    ``logistic`` and ``tanh`` first standardise by the sample mean and
    standard deviation (taken as 1 for a constant sample); ``minmax`` maps
    the range onto [0, 1] (constant sample to 0.5).
    """
    mode = SigmoidMode(mode)
    x = np.asarray(values, dtype=float)
    if x.size == 0:
        return []
    if mode is SigmoidMode.MINMAX:
        lo, hi = x.min(), x.max()
        if hi == lo:
            return [0.5] * x.size
        return ((x - lo) / (hi - lo)).tolist()
    sd = x.std()
    z = (x - x.mean()) / (sd if sd > 0 else 1.0)
    if mode is SigmoidMode.TANH:
        return (0.5 * (np.tanh(z) + 1.0)).tolist()
    return (1.0 / (1.0 + np.exp(-z))).tolist()


def max_degree_norm(tree: CascadeTree, g0: StaticGraph | None = None, base: DegreeBase | str = DegreeBase.TREE) -> float:
    base = DegreeBase(base)
    n = len(tree.nodes)
    if base is DegreeBase.G0:
        if g0 is None:
            raise ValueError("G_0 degree base needs g0")
        top = max((g0.degree(v) for v in g0.nodes), default=0)
        return max(g0.degree(v) for v in tree.nodes) / top if top else 0.0
    if n < 2:
        return 0.0
    deg = dict.fromkeys(tree.nodes, 0)
    for p, c in tree.edges:
        deg[p] += 1
        deg[c] += 1
    return max(deg.values()) / (n - 1)


def cascade_similarity(t1: CascadeTree, t2: CascadeTree) -> float:
    """Mean neighbourhood Jaccard over shared nodes (0 when no node is shared).

    Neighbourhoods are taken in each tree's undirected skeleton; a shared node
    isolated in both trees counts as identical.
    """
    shared = t1.nodes & t2.nodes
    if not shared:
        return 0.0
    n1, n2 = _neighbourhoods(t1), _neighbourhoods(t2)
    total = 0.0
    for z in shared:
        union = n1[z] | n2[z]
        total += len(n1[z] & n2[z]) / len(union) if union else 1.0
    return total / len(shared)


def _neighbourhoods(tree: CascadeTree) -> dict:
    nb: dict = {v: set() for v in tree.nodes}
    for p, c in tree.edges:
        nb[p].add(c)
        nb[c].add(p)
    return nb


def order_by_size(trees: Sequence[CascadeTree]) -> list[CascadeTree]:
    return sorted(trees, key=lambda t: (len(t.nodes), t.id))


def similarity_matrix(trees: Sequence[CascadeTree]) -> tuple[list[int], np.ndarray]:
    """Pairwise similarities with rows ordered by ascending ``(size, id)``."""
    if not trees:
        raise ValueError("similarity matrix needs at least one cascade")
    ordered = order_by_size(trees)
    n = len(ordered)
    mat = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            mat[i, j] = mat[j, i] = cascade_similarity(ordered[i], ordered[j])
    return [t.id for t in ordered], mat


def cascade_metrics(
    trees: Sequence[CascadeTree],
    g0: StaticGraph,
    k: int,
    sigmoid: SigmoidMode | str = SigmoidMode.LOGISTIC,
    degree_base: DegreeBase | str = DegreeBase.TREE,
) -> list[CascadeMetrics]:
    raw = [cascade_virality(t) for t in trees]
    norm = normalize_virality(raw, sigmoid)
    return [
        CascadeMetrics(
            cascade_id=t.id,
            size=cascade_size(t),
            size_fraction=size_fraction(t, g0),
            duration=cascade_duration(t, k),
            virality_raw=v,
            virality_norm=vn,
            max_degree_norm=max_degree_norm(t, g0, degree_base),
        )
        for t, v, vn in zip(trees, raw, norm)
    ]


METRIC_COLUMNS = (
    "cascade_id",
    "site",
    "size",
    "size_fraction",
    "duration",
    "virality_raw",
    "virality_norm",
    "max_degree_norm",
)


def write_metrics_csv(path: Path, rows: Sequence[CascadeMetrics], site: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(METRIC_COLUMNS)
        for m in rows:
            w.writerow(
                (m.cascade_id, site, m.size, repr(m.size_fraction), repr(m.duration),
                 repr(m.virality_raw), repr(m.virality_norm), repr(m.max_degree_norm))
            )


def read_metrics_csv(path: Path) -> list[CascadeMetrics]:
    with open(path, newline="") as fh:
        return [
            CascadeMetrics(
                cascade_id=int(r["cascade_id"]),
                size=int(r["size"]),
                size_fraction=float(r["size_fraction"]),
                duration=float(r["duration"]),
                virality_raw=float(r["virality_raw"]),
                virality_norm=float(r["virality_norm"]),
                max_degree_norm=float(r["max_degree_norm"]),
            )
            for r in csv.DictReader(fh)
        ]


def write_similarity_csv(path: Path, ids: Sequence[int], mat: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["cascade_id", *ids])
        for cid, row in zip(ids, mat):
            w.writerow([cid, *(repr(float(x)) for x in row)])


def upper_triangle(mat: np.ndarray) -> list[float]:
    iu = np.triu_indices(mat.shape[0], k=1)
    return [float(x) for x in mat[iu]]


__all__ = [
    "CascadeMetrics",
    "DegreeBase",
    "METRIC_COLUMNS",
    "SigmoidMode",
    "cascade_duration",
    "cascade_metrics",
    "cascade_similarity",
    "cascade_size",
    "cascade_virality",
    "max_degree_norm",
    "normalize_virality",
    "read_metrics_csv",
    "similarity_matrix",
    "size_fraction",
    "upper_triangle",
    "write_metrics_csv",
    "write_similarity_csv",
]
