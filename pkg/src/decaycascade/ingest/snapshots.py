"""Core-node selection and the disjoint-window snapshot series."""

from __future__ import annotations

import csv
import enum
import json
import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

from ..graphcore.graph import StaticGraph, edge_key, sorted_nodes
from .events import InputError, InteractionEvent, event_sort_key, parse_node_id

log = logging.getLogger(__name__)


class CoreFilterMode(str, enum.Enum):
    REPUTATION = "reputation"
    ACTIVITY = "activity"


@dataclass(frozen=True)
class CoreFilterSpec:
    mode: CoreFilterMode = CoreFilterMode.REPUTATION
    threshold: int = 500

    def __post_init__(self):
        object.__setattr__(self, "mode", CoreFilterMode(self.mode))
        if self.threshold <= 0:
            raise ValueError("core filter threshold must be positive")


def select_core_nodes(
    events: Iterable[InteractionEvent],
    reputations: Mapping | None,
    spec: CoreFilterSpec,
) -> frozenset:
    if spec.mode is CoreFilterMode.REPUTATION:
        if reputations is None:
            raise InputError("reputation filter needs user reputations")
        core = frozenset(v for v, rep in reputations.items() if rep >= spec.threshold)
    else:
        counts: Counter = Counter()
        for e in events:
            counts[e.source] += 1
            counts[e.target] += 1
        core = frozenset(v for v, c in counts.items() if c >= spec.threshold)
    if not core:
        raise InputError(
            f"no node passes the {spec.mode.value} threshold {spec.threshold}; try a lower threshold"
        )
    return core


@dataclass(frozen=True)
class SnapshotSeries:
    """Graphs ``G_0 .. G_{k-1}`` over one node universe with last-activity indices.

    ``G_0`` carries every universe node (isolated ones included); later
    snapshots carry only nodes incident to an edge in their window.
    """

    snapshots: tuple[StaticGraph, ...]
    window: int
    start: int
    last_activity: Mapping
    dropped_events: int = 0
    core_nodes: frozenset = field(init=False)
    alive: frozenset = field(init=False)

    def __post_init__(self):
        if len(self.snapshots) < 2:
            raise ValueError("a snapshot series needs k >= 2")
        object.__setattr__(self, "core_nodes", frozenset(self.snapshots[0].nodes))
        last = self.k - 1
        object.__setattr__(self, "alive", frozenset(v for v, t in self.last_activity.items() if t == last))

    @property
    def k(self) -> int:
        return len(self.snapshots)

    @property
    def g0(self) -> StaticGraph:
        return self.snapshots[0]

    def validate(self) -> None:
        """Raise ``ValueError`` on any broken series invariant."""
        if set(self.last_activity) != set(self.core_nodes):
            raise ValueError("last_activity must cover exactly the core nodes")
        for t, g in enumerate(self.snapshots):
            extra = set(g.nodes) - self.core_nodes
            if extra:
                raise ValueError(f"snapshot {t} has nodes outside G_0: {sorted_nodes(extra)[:5]}")
        for v, last_seen in self.last_activity.items():
            if not 0 <= last_seen < self.k:
                raise ValueError(f"last_seen({v!r}) = {last_seen} out of range")
            g = self.snapshots[last_seen]
            if v not in g or g.degree(v) == 0:
                raise ValueError(f"node {v!r} has no edge in its last-activity snapshot {last_seen}")
            for later in self.snapshots[last_seen + 1:]:
                if v in later and later.degree(v) > 0:
                    raise ValueError(f"node {v!r} active after last_seen = {last_seen}")

    def summary(self) -> dict:
        first, last = self.snapshots[0], self.snapshots[-1]
        return {
            "start": self.start,
            "end": self.start + self.k * self.window,
            "k": self.k,
            "V_G0": len(first),
            "E_G0": first.number_of_edges(),
            "V_Glast": sum(1 for v in last.nodes if last.degree(v) > 0),
            "E_Glast": last.number_of_edges(),
        }


def build_snapshots(
    events: Iterable[InteractionEvent],
    core: Iterable,
    k: int,
    window: int | None = None,
    start: int | None = None,
) -> SnapshotSeries:
    """Bucket core-to-core interactions into ``k`` disjoint windows.

    Window ``t`` covers ``[start + t*window, start + (t+1)*window)``. Defaults:
    ``start`` is the first core interaction and ``window`` the smallest
    integer number of seconds that fits the whole span into ``k`` windows.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if window is not None and window <= 0:
        raise ValueError("window must be positive")
    core = frozenset(core)
    inner = sorted((e for e in events if e.source in core and e.target in core), key=event_sort_key)
    if not inner:
        raise InputError("no interaction between two core nodes")
    if start is None:
        start = inner[0].timestamp
    if window is None:
        span = inner[-1].timestamp - start
        window = max(1, -(-(span + 1) // k))

    edge_sets: list[set] = [set() for _ in range(k)]
    dropped = 0
    for e in inner:
        t = (e.timestamp - start) // window
        if not 0 <= t < k:
            dropped += 1
            continue
        edge_sets[t].add(edge_key(e.source, e.target))
    if dropped:
        log.warning("%d events fall outside the %d windows and were dropped", dropped, k)

    last_seen: dict = {}
    for t, edges in enumerate(edge_sets):
        for u, v in edges:
            last_seen[u] = t
            last_seen[v] = t
    if not last_seen:
        raise InputError("no core interaction falls inside the observation windows")
    silent = core - set(last_seen)
    if silent:
        log.info("%d core nodes never interact with another core node; excluded", len(silent))

    snapshots = [StaticGraph(last_seen, edge_sets[0])]
    snapshots += [StaticGraph((), edges) for edges in edge_sets[1:]]
    return SnapshotSeries(tuple(snapshots), int(window), int(start), last_seen, dropped)


def save_series(series: SnapshotSeries, directory: Path) -> None:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    meta = {
        "k": series.k,
        "window": series.window,
        "start": series.start,
        "core_size": len(series.core_nodes),
        "dropped_events": series.dropped_events,
    }
    (directory / "meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    for t, g in enumerate(series.snapshots):
        with open(directory / f"snapshot_{t}.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("u", "v"))
            w.writerows(g.edges())
    with open(directory / "last_seen.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("node", "last_seen"))
        for v in sorted_nodes(series.last_activity):
            w.writerow((v, series.last_activity[v]))


def load_series(directory: Path) -> SnapshotSeries:
    directory = Path(directory)
    meta = json.loads((directory / "meta.json").read_text())
    with open(directory / "last_seen.csv", newline="") as fh:
        last_seen = {parse_node_id(r["node"]): int(r["last_seen"]) for r in csv.DictReader(fh)}
    snapshots = []
    for t in range(meta["k"]):
        with open(directory / f"snapshot_{t}.csv", newline="") as fh:
            edges = [(parse_node_id(r["u"]), parse_node_id(r["v"])) for r in csv.DictReader(fh)]
        snapshots.append(StaticGraph(last_seen if t == 0 else (), edges))
    return SnapshotSeries(tuple(snapshots), meta["window"], meta["start"], last_seen, meta.get("dropped_events", 0))
