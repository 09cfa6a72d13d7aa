"""Raw interaction data to snapshot series."""

from .edgelist import EdgeListResult, parse_edge_list
from .events import EventKind, InputError, InteractionEvent, event_sort_key, parse_node_id
from .snapshots import (
    CoreFilterMode,
    CoreFilterSpec,
    SnapshotSeries,
    build_snapshots,
    load_series,
    save_series,
    select_core_nodes,
)
from .stackexchange import StackExchangeDump, parse_stackexchange_dump, parse_timestamp
from .synthetic import PlantedSpec, PlantedTree, SyntheticDecay, generate_synthetic_decay

__all__ = [
    "CoreFilterMode",
    "CoreFilterSpec",
    "EdgeListResult",
    "EventKind",
    "InputError",
    "InteractionEvent",
    "PlantedSpec",
    "PlantedTree",
    "SnapshotSeries",
    "StackExchangeDump",
    "SyntheticDecay",
    "build_snapshots",
    "event_sort_key",
    "generate_synthetic_decay",
    "load_series",
    "parse_edge_list",
    "parse_node_id",
    "parse_stackexchange_dump",
    "parse_timestamp",
    "save_series",
    "select_core_nodes",
]
