from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Hashable

from ..graphcore.graph import node_key


class InputError(ValueError):
    """Raw input cannot be turned into a usable event stream or series."""


class EventKind(str, enum.Enum):
    ANSWER = "Answer"
    COMMENT = "Comment"
    VOTE = "Vote"
    GENERIC = "Generic"


@dataclass(frozen=True)
class InteractionEvent:
    source: Hashable
    target: Hashable
    timestamp: int
    kind: EventKind = EventKind.GENERIC

    def __post_init__(self):
        if self.source == self.target:
            raise ValueError(f"self-interaction for node {self.source!r}")
        if self.timestamp < 0:
            raise ValueError(f"negative timestamp {self.timestamp}")


def event_sort_key(e: InteractionEvent) -> tuple:
    return (e.timestamp, node_key(e.source), node_key(e.target), e.kind.value)


def parse_node_id(text: str):
    """Platform ids are integers when they look like integers, strings otherwise."""
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        return text
