"""Backward slicing of event traces.

Starting from a suspect event, a worklist closure repeatedly pulls in
every event some already-included event depends on, until nothing new
appears. Events never reached cannot have influenced the start event and
are dropped. The result keeps original event numbering, the full edge
set among slice members, and the specific edge that first pulled each
member in.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

from .engine import DependencyEdge, DependencyKind, SliceMode, all_dependencies
from .events import EventTrace
from .model import SystemModel


class NotSliceMemberError(ValueError):
    """An explanation was requested for an event outside the slice."""


@dataclass(frozen=True, slots=True)
class SliceStats:
    trace_length: int
    slice_length: int
    reduction_ratio: float


@dataclass(frozen=True, slots=True)
class SliceResult:
    """Outcome of one slicing run.

    ``members`` are the surviving event indices in ascending order,
    always including ``start_index``. ``edges`` holds every dependency
    edge discovered among members; ``discovery_edges`` the one edge per
    non-start member that first marked it.
    """

    start_index: int
    mode: SliceMode
    members: tuple[int, ...]
    edges: frozenset[DependencyEdge]
    discovery_edges: frozenset[DependencyEdge]
    stats: SliceStats


def _edge_sort_key(edge: DependencyEdge):
    return (edge.to_index, edge.from_index, edge.kind.value,
            edge.base_kind.value if edge.base_kind else "")


def slice_trace(trace: EventTrace, model: SystemModel, start_index: int,
                mode: SliceMode | str = SliceMode.BASIC,
                *, lsru_strict: bool = False,
                worklist_order: str = "fifo") -> SliceResult:
    """Compute the backward slice of ``trace`` from ``start_index``.

    The member set is the least fixpoint of closing ``{start_index}``
    under dependency predecessors in the given mode; it does not depend
    on worklist order. ``worklist_order`` accepts "fifo" (the default)
    or "lifo" and exists so order independence can be exercised.
    """
    trace.event(start_index)
    mode = SliceMode(mode)
    if worklist_order not in ("fifo", "lifo"):
        raise ValueError(f"worklist_order must be 'fifo' or 'lifo', got {worklist_order!r}")

    marked: set[int] = {start_index}
    discovery: dict[int, DependencyEdge] = {}
    edges: set[DependencyEdge] = set()
    pending: deque[int] = deque([start_index])
    while pending:
        j = pending.popleft() if worklist_order == "fifo" else pending.pop()
        found = all_dependencies(trace, j, model, mode, lsru_strict=lsru_strict)
        edges |= found
        # Sorted so discovery attribution is stable across runs.
        for edge in sorted(found, key=_edge_sort_key):
            i = edge.from_index
            if i not in marked:
                marked.add(i)
                discovery[i] = edge
                pending.append(i)

    members = tuple(sorted(marked))
    stats = SliceStats(
        trace_length=len(trace),
        slice_length=len(members),
        reduction_ratio=len(members) / len(trace),
    )
    return SliceResult(
        start_index=start_index,
        mode=mode,
        members=members,
        edges=frozenset(edges),
        discovery_edges=frozenset(discovery.values()),
        stats=stats,
    )


def explain(result: SliceResult, member: int) -> list[DependencyEdge]:
    """All edges through which ``member`` influences other slice members,
    with the edge that first marked it listed first. The start event has
    no discovery edge."""
    if member not in result.members:
        raise NotSliceMemberError(f"event {member} is not in the slice")
    outgoing = sorted(
        (edge for edge in result.edges if edge.from_index == member),
        key=_edge_sort_key,
    )
    marker = next(
        (edge for edge in result.discovery_edges if edge.from_index == member),
        None,
    )
    if marker is None:
        return outgoing
    return [marker] + [edge for edge in outgoing if edge != marker]


_EDGE_COLORS = {
    DependencyKind.COS: "black",
    DependencyKind.LRU: "blue",
    DependencyKind.LSRU: "darkorange",
    DependencyKind.CE: "red",
}


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def to_dot(result: SliceResult, trace: EventTrace) -> str:
    """Render the slice as a Graphviz digraph.

    One node per member labeled with the event row, one arrow per edge
    colored and labeled by dependency kind. Output is byte-stable for
    identical inputs.
    """
    lines = [
        "digraph slice {",
        "  rankdir=TB;",
        "  node [shape=box];",
    ]
    for index in result.members:
        event = trace.event(index)
        label = _dot_escape(
            f"{index}: {event.process} {event.operation} {event.resource} "
            f"{event.old_state}→{event.new_state}"
        )
        extra = ", penwidth=2" if index == result.start_index else ""
        lines.append(f'  e{index} [label="{label}"{extra}];')
    for edge in sorted(result.edges, key=lambda e: (e.from_index, e.to_index,
                                                    e.kind.value)):
        color = _EDGE_COLORS[edge.kind]
        lines.append(
            f'  e{edge.from_index} -> e{edge.to_index} '
            f'[label="{edge.kind.value}", color="{color}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def canonical_json(obj) -> str:
    """Deterministic compact JSON used wherever byte-stable output is
    promised (CLI JSON output, HTTP slice bodies)."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def result_to_json_obj(result: SliceResult) -> dict:
    return {
        "start": result.start_index,
        "mode": result.mode.value,
        "members": list(result.members),
        "edges": [e.to_json_obj() for e in sorted(result.edges, key=_edge_sort_key)],
        "discovery_edges": [
            e.to_json_obj()
            for e in sorted(result.discovery_edges, key=_edge_sort_key)
        ],
        "stats": {
            "trace_length": result.stats.trace_length,
            "slice_length": result.stats.slice_length,
            "reduction_ratio": result.stats.reduction_ratio,
        },
    }


def result_to_json(result: SliceResult) -> str:
    return canonical_json(result_to_json_obj(result))


def result_from_json(text: str) -> SliceResult:
    obj = json.loads(text)
    stats = obj["stats"]
    return SliceResult(
        start_index=obj["start"],
        mode=SliceMode(obj["mode"]),
        members=tuple(obj["members"]),
        edges=frozenset(DependencyEdge.from_json_obj(e) for e in obj["edges"]),
        discovery_edges=frozenset(
            DependencyEdge.from_json_obj(e) for e in obj["discovery_edges"]
        ),
        stats=SliceStats(
            trace_length=stats["trace_length"],
            slice_length=stats["slice_length"],
            reduction_ratio=stats["reduction_ratio"],
        ),
    )
