"""Streaming reader for per-site Stack Exchange XML dump tables.

Each table is a flat sequence of ``<row .../>`` elements; expat is used so
that large dumps are read in one pass and parse errors can report byte
offsets.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable
from xml.parsers import expat

from .events import EventKind, InputError, InteractionEvent, event_sort_key

log = logging.getLogger(__name__)

QUESTION, ANSWER = "1", "2"


@dataclass
class StackExchangeDump:
    events: list[InteractionEvent]
    reputations: dict[int, int]
    skipped: Counter = field(default_factory=Counter)


def parse_timestamp(text: str) -> int:
    """Dump dates are naive ISO-8601 in UTC; returns whole epoch seconds."""
    dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return int(dt.timestamp())


def iter_rows(path: Path, handle: Callable[[dict], None]) -> None:
    path = Path(path)
    parser = expat.ParserCreate()

    def start(name, attrs):
        if name != "row":
            return
        try:
            handle(attrs)
        except (ValueError, KeyError) as exc:
            raise InputError(f"{path}: bad row at byte {parser.CurrentByteIndex}: {exc}") from exc

    parser.StartElementHandler = start
    with open(path, "rb") as fh:
        try:
            parser.ParseFile(fh)
        except expat.ExpatError as exc:
            raise InputError(
                f"{path}: malformed XML at byte {parser.ErrorByteIndex}: {expat.ErrorString(exc.code)}"
            ) from exc


def _user(attrs: dict, key: str):
    raw = attrs.get(key)
    return int(raw) if raw not in (None, "") else None


def parse_stackexchange_dump(
    posts_file: Path,
    comments_file: Path,
    users_file: Path | None,
    votes_file: Path | None = None,
) -> StackExchangeDump:
    """Interaction events and user reputations from one site's dump.

    Answers point at the question owner, comments at the commented post's
    owner, and votes (only when the dump names the voter) at the voted
    post's owner.
    """
    if users_file is None or not Path(users_file).exists():
        raise InputError(f"Users table {users_file} is required for the reputation filter")
    skipped: Counter = Counter()
    owner: dict[int, int | None] = {}
    answers: list[tuple[int | None, int | None, int]] = []

    def on_post(a):
        kind = a.get("PostTypeId")
        if kind not in (QUESTION, ANSWER):
            skipped["post_type"] += 1
            return
        pid = int(a["Id"])
        owner[pid] = _user(a, "OwnerUserId")
        if kind == ANSWER:
            parent = a.get("ParentId")
            answers.append((owner[pid], int(parent) if parent else None, parse_timestamp(a["CreationDate"])))

    iter_rows(posts_file, on_post)

    events: list[InteractionEvent] = []

    def emit(source, post_id, ts, kind):
        if source is None:
            skipped["missing_owner"] += 1
        elif post_id not in owner:
            skipped["missing_parent"] += 1
        elif owner[post_id] is None:
            skipped["missing_owner"] += 1
        elif owner[post_id] == source:
            skipped["self_interaction"] += 1
        else:
            events.append(InteractionEvent(source, owner[post_id], ts, kind))

    for author, parent, ts in answers:
        emit(author, parent, ts, EventKind.ANSWER)

    def on_comment(a):
        emit(_user(a, "UserId"), int(a["PostId"]), parse_timestamp(a["CreationDate"]), EventKind.COMMENT)

    iter_rows(comments_file, on_comment)

    if votes_file is not None:
        def on_vote(a):
            voter = _user(a, "UserId")
            if voter is None:
                skipped["anonymous_vote"] += 1
                return
            emit(voter, int(a["PostId"]), parse_timestamp(a["CreationDate"]), EventKind.VOTE)

        iter_rows(votes_file, on_vote)

    reputations: dict[int, int] = {}

    def on_user(a):
        reputations[int(a["Id"])] = int(a.get("Reputation", 0))

    iter_rows(users_file, on_user)

    for reason, count in sorted(skipped.items()):
        log.warning("skipped %d rows: %s", count, reason)
    events.sort(key=event_sort_key)
    return StackExchangeDump(events, reputations, skipped)
