from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .events import EventKind, InteractionEvent, parse_node_id

log = logging.getLogger(__name__)


@dataclass
class EdgeListResult:
    events: list[InteractionEvent]
    errors: list[tuple[int, str]] = field(default_factory=list)
    warnings: list[tuple[int, str]] = field(default_factory=list)


def _is_int(text: str) -> bool:
    try:
        int(text)
    except ValueError:
        return False
    return True


def parse_edge_list(path: Path) -> EdgeListResult:
    """Read ``source,target,timestamp[,kind]`` records in file order.

    A first line whose timestamp column is not an integer is taken as a
    header. Bad lines are reported by 1-based line number, never raised.
    """
    result = EdgeListResult([])
    kinds = {k.value.lower(): k for k in EventKind}
    with open(path, newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or all(not c.strip() for c in row):
                continue
            if lineno == 1 and len(row) >= 3 and not _is_int(row[2].strip()):
                continue
            if len(row) not in (3, 4):
                result.errors.append((lineno, f"expected 3 or 4 fields, got {len(row)}"))
                continue
            ts = row[2].strip()
            if not _is_int(ts):
                result.errors.append((lineno, f"timestamp {ts!r} is not an integer"))
                continue
            kind = EventKind.GENERIC
            if len(row) == 4 and row[3].strip():
                kind = kinds.get(row[3].strip().lower())
                if kind is None:
                    result.errors.append((lineno, f"unknown kind {row[3].strip()!r}"))
                    continue
            src, dst = parse_node_id(row[0]), parse_node_id(row[1])
            if src == dst:
                result.warnings.append((lineno, f"self-interaction of {src!r} dropped"))
                continue
            try:
                result.events.append(InteractionEvent(src, dst, int(ts), kind))
            except ValueError as exc:
                result.errors.append((lineno, str(exc)))
    for lineno, msg in result.warnings:
        log.warning("%s:%d: %s", path, lineno, msg)
    return result
