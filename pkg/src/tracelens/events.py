"""Event records and event traces.

An event trace is an ordered sequence of records, each saying that a
process performed an operation on a resource and what state change the
resource underwent. Traces are read and written in two formats: a TSV
table with a fixed header, and a JSON array of row objects. Indices are
1-based and dense; files whose numbering has gaps are renumbered on load
with the original numbers kept as annotations.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator

log = logging.getLogger("tracelens")

TSV_COLUMNS = ("no", "process", "operation", "resource", "old_state", "new_state")
TSV_HEADER = "\t".join(TSV_COLUMNS)

# Identifier fields may contain anything except the characters that are
# structural in the TSV encoding.
_FORBIDDEN_CHARS = ("\t", "\n", "\r")


class TraceFormat(str, Enum):
    TSV = "tsv"
    JSON = "json"


class TraceParseError(ValueError):
    """Trace text could not be parsed into a well-formed trace."""


class ViolationKind(str, Enum):
    UNKNOWN_RESOURCE = "UnknownResource"
    UNKNOWN_OPERATION = "UnknownOperation"
    ILLEGAL_TRANSITION = "IllegalTransition"
    STATE_DISCONTINUITY = "StateDiscontinuity"


@dataclass(frozen=True, slots=True)
class Violation:
    """One conformance problem found in a trace, anchored to an event."""

    event_index: int
    kind: ViolationKind
    message: str


@dataclass(frozen=True, slots=True)
class Event:
    """One trace record.

    ``process`` ran ``operation`` on ``resource``, taking it from
    ``old_state`` to ``new_state``. ``index`` is the 1-based position in
    the trace. ``source_no`` keeps the original file numbering when a
    parsed trace had to be renumbered; it never affects equality.
    """

    index: int
    process: str
    operation: str
    resource: str
    old_state: str
    new_state: str
    source_no: int | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.index < 1:
            raise ValueError(f"event index must be >= 1, got {self.index}")
        for name in ("process", "operation", "resource", "old_state", "new_state"):
            value = getattr(self, name)
            if not value:
                raise ValueError(f"event {self.index}: empty {name}")
            if any(ch in value for ch in _FORBIDDEN_CHARS):
                raise ValueError(f"event {self.index}: {name} contains tab or newline")

    @property
    def changes_state(self) -> bool:
        return self.old_state != self.new_state


@dataclass(frozen=True, eq=True)
class EventTrace:
    """Immutable ordered sequence of events with dense 1-based indices."""

    events: tuple[Event, ...]

    def __init__(self, events: Iterable[Event]) -> None:
        object.__setattr__(self, "events", tuple(events))
        for position, event in enumerate(self.events, start=1):
            if event.index != position:
                raise ValueError(
                    f"trace indices must be dense: position {position} "
                    f"holds event numbered {event.index}"
                )

    def __len__(self) -> int:
        return len(self.events)

    def __iter__(self) -> Iterator[Event]:
        return iter(self.events)

    def event(self, index: int) -> Event:
        """Return the event at 1-based ``index``."""
        if not 1 <= index <= len(self.events):
            raise IndexError(
                f"event index {index} out of range 1..{len(self.events)}"
            )
        return self.events[index - 1]

    @cached_property
    def process_ids(self) -> frozenset[str]:
        """Every identifier that appears in a process field."""
        return frozenset(event.process for event in self.events)

    @cached_property
    def resource_ids(self) -> frozenset[str]:
        return frozenset(event.resource for event in self.events)


def _events_from_rows(rows: list[tuple[int, str, str, str, str, str]],
                      where: list[str]) -> EventTrace:
    """Build a trace from parsed rows, renumbering if the file numbering
    is not exactly 1..n in order. ``where`` names each row's location in
    the source text for error messages."""
    numbers = [row[0] for row in rows]
    seen: dict[int, str] = {}
    for number, location in zip(numbers, where):
        if number in seen:
            raise TraceParseError(
                f"{location}: duplicate event number {number} "
                f"(first seen at {seen[number]})"
            )
        seen[number] = location

    dense = numbers == list(range(1, len(rows) + 1))
    if not dense and rows:
        log.warning(
            "trace numbering is not dense (first number %d, last %d, %d rows); "
            "renumbering 1..%d and keeping originals as source_no",
            numbers[0], numbers[-1], len(rows), len(rows),
        )

    events = []
    for position, ((number, proc, oper, res, old, new), location) in enumerate(
        zip(rows, where), start=1
    ):
        try:
            if dense:
                events.append(Event(number, proc, oper, res, old, new))
            else:
                events.append(Event(position, proc, oper, res, old, new,
                                    source_no=number))
        except ValueError as exc:
            raise TraceParseError(f"{location}: {exc}") from exc
    return EventTrace(events)


def _parse_tsv(text: str) -> EventTrace:
    # Split on newlines only: characters like form feed that str.splitlines
    # treats as boundaries are legal inside identifiers.
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    lines = [line[:-1] if line.endswith("\r") else line for line in lines]
    if not lines or not any(line.strip() for line in lines):
        raise TraceParseError("no events")
    if lines[0] != TSV_HEADER:
        raise TraceParseError(
            f"line 1: expected header {TSV_HEADER!r}, got {lines[0]!r}"
        )
    rows: list[tuple[int, str, str, str, str, str]] = []
    where: list[str] = []
    for lineno, line in enumerate(lines[1:], start=2):
        fields = line.split("\t")
        if len(fields) != 6:
            raise TraceParseError(
                f"line {lineno}: expected 6 tab-separated fields, got {len(fields)}"
            )
        number_text, proc, oper, res, old, new = fields
        try:
            number = int(number_text)
        except ValueError:
            raise TraceParseError(
                f"line {lineno}: event number {number_text!r} is not an integer"
            ) from None
        if number < 1:
            raise TraceParseError(f"line {lineno}: event number must be >= 1")
        for column, value in zip(TSV_COLUMNS[1:], (proc, oper, res, old, new)):
            if not value:
                raise TraceParseError(f"line {lineno}: empty {column}")
        rows.append((number, proc, oper, res, old, new))
        where.append(f"line {lineno}")
    return _events_from_rows(rows, where)


def _parse_json(text: str) -> EventTrace:
    if not text.strip():
        raise TraceParseError("no events")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TraceParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, list):
        raise TraceParseError("expected a JSON array of event objects")
    rows: list[tuple[int, str, str, str, str, str]] = []
    where: list[str] = []
    for position, obj in enumerate(data, start=1):
        location = f"entry {position}"
        if not isinstance(obj, dict):
            raise TraceParseError(f"{location}: expected an object")
        extra = set(obj) - set(TSV_COLUMNS)
        if extra:
            raise TraceParseError(
                f"{location}: unexpected key {sorted(extra)[0]!r}"
            )
        missing = set(TSV_COLUMNS) - set(obj)
        if missing:
            raise TraceParseError(
                f"{location}: missing key {sorted(missing)[0]!r}"
            )
        number = obj["no"]
        if not isinstance(number, int) or isinstance(number, bool) or number < 1:
            raise TraceParseError(
                f"{location}: 'no' must be a positive integer, got {number!r}"
            )
        values = []
        for column in TSV_COLUMNS[1:]:
            value = obj[column]
            if not isinstance(value, str) or not value:
                raise TraceParseError(f"{location}: empty or non-string {column}")
            values.append(value)
        rows.append((number, *values))  # type: ignore[arg-type]
        where.append(location)
    return _events_from_rows(rows, where)


def parse_trace(text: str, format: TraceFormat | str = TraceFormat.TSV) -> EventTrace:
    """Parse trace file content into an :class:`EventTrace`.

    Raises :class:`TraceParseError` naming the offending line (TSV) or
    entry (JSON) on malformed input. A header-only file is a valid empty
    trace; empty or blank text is not.
    """
    fmt = TraceFormat(format)
    if fmt is TraceFormat.TSV:
        return _parse_tsv(text)
    return _parse_json(text)


def trace_to_json_objs(trace: EventTrace) -> list[dict]:
    return [
        {
            "no": event.index,
            "process": event.process,
            "operation": event.operation,
            "resource": event.resource,
            "old_state": event.old_state,
            "new_state": event.new_state,
        }
        for event in trace
    ]


def serialize_trace(trace: EventTrace, format: TraceFormat | str = TraceFormat.TSV) -> str:
    """Render a trace back to file content. Round-trips through
    :func:`parse_trace` losslessly in both formats."""
    fmt = TraceFormat(format)
    if fmt is TraceFormat.TSV:
        lines = [TSV_HEADER]
        for event in trace:
            lines.append("\t".join((
                str(event.index), event.process, event.operation,
                event.resource, event.old_state, event.new_state,
            )))
        return "\n".join(lines) + "\n"
    return json.dumps(trace_to_json_objs(trace), indent=2) + "\n"
