"""Dependency detectors over event traces.

Four detectors answer, for a chosen event, which earlier events may have
influenced it:

* Change-Of-State (COS): the last event that changed the resource into
  the state the chosen event sees.
* Last-Resource-Use (LRU): when an active resource changes state, the
  last prior use that process made of each resource.
* Last-Shared-Resource-Use (LSRU): the last use, by a different process,
  of each resource the affected process used recently.
* Cause-Effect (CE): the subset of LRU and LSRU predecessors whose
  transition is declared by a model rule to possibly cause the chosen
  event's transition.

All detectors are pure backward queries: nothing after the queried index
is ever read, so appending events to a trace never changes an answer at
an existing index.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .events import EventTrace
from .model import SystemModel, matches_rule


class DependencyKind(str, Enum):
    COS = "COS"
    LRU = "LRU"
    LSRU = "LSRU"
    CE = "CE"


class SliceMode(str, Enum):
    BASIC = "basic"
    CAUSE_EFFECT = "cause-effect"


@dataclass(frozen=True, slots=True)
class DependencyEdge:
    """A directed dependency: the event at ``to_index`` depends on the
    earlier event at ``from_index``. CE edges record which base relation
    (LRU or LSRU) the rule match refined."""

    from_index: int
    to_index: int
    kind: DependencyKind
    base_kind: DependencyKind | None = None

    def __post_init__(self) -> None:
        if self.from_index >= self.to_index:
            raise ValueError(
                f"edge must point forward: {self.from_index} -> {self.to_index}"
            )
        if self.kind is DependencyKind.CE:
            if self.base_kind not in (DependencyKind.LRU, DependencyKind.LSRU):
                raise ValueError("CE edge requires base_kind LRU or LSRU")
        elif self.base_kind is not None:
            raise ValueError(f"{self.kind.value} edge must not carry base_kind")

    def to_json_obj(self) -> dict:
        obj = {"from": self.from_index, "to": self.to_index, "kind": self.kind.value}
        if self.base_kind is not None:
            obj["base"] = self.base_kind.value
        return obj

    @classmethod
    def from_json_obj(cls, obj: dict) -> "DependencyEdge":
        base = obj.get("base")
        return cls(
            from_index=obj["from"],
            to_index=obj["to"],
            kind=DependencyKind(obj["kind"]),
            base_kind=DependencyKind(base) if base is not None else None,
        )


def cos_predecessor(trace: EventTrace, j: int) -> int | None:
    """Index of the last event that changed the resource of event ``j``
    into the state ``j`` observes, or None.

    Walking backward over events on the same resource: events that sit in
    the observed state without changing it are transparent, the first
    event that did change state is the answer if it produced the observed
    state, and anything else breaks the chain.
    """
    target = trace.event(j)
    wanted = target.old_state
    for k in range(j - 1, 0, -1):
        prior = trace.event(k)
        if prior.resource != target.resource:
            continue
        if prior.new_state != wanted:
            return None
        if prior.old_state != prior.new_state:
            return k
    return None


def lru_predecessors(trace: EventTrace, j: int, model: SystemModel) -> set[int]:
    """Indices of the last use the process of event ``j`` made of each
    distinct resource before ``j``.

    Empty unless the resource of ``j`` is active and ``j`` changes its
    state. A process's operation on itself counts as a use like any
    other.
    """
    target = trace.event(j)
    if not model.is_active(target.resource, processes=trace.process_ids):
        return set()
    if not target.changes_state:
        return set()
    process = target.resource
    found: set[int] = set()
    seen_resources: set[str] = set()
    for k in range(j - 1, 0, -1):
        prior = trace.event(k)
        if prior.process != process or prior.resource in seen_resources:
            continue
        seen_resources.add(prior.resource)
        found.add(k)
    return found


def lsru_predecessors(trace: EventTrace, j: int, model: SystemModel,
                      *, strict: bool = False) -> set[int]:
    """Indices of the last use, by another process, of each resource the
    process of event ``j`` used recently.

    The default reading ignores intervening uses by the affected process
    itself when checking that a use is the last one: for each resource
    with an LRU predecessor, the latest use of it before ``j`` by any
    other process qualifies.

    ``strict`` switches to the literal reading, under which any
    intervening use of the resource disqualifies a candidate, except the
    anchoring last-use event itself when the candidate precedes it.
    """
    bases = lru_predecessors(trace, j, model)
    if not bases:
        return set()
    process = trace.event(j).resource
    found: set[int] = set()
    if not strict:
        for m in bases:
            resource = trace.event(m).resource
            for k in range(j - 1, 0, -1):
                prior = trace.event(k)
                if prior.resource == resource and prior.process != process:
                    found.add(k)
                    break
        return found
    for m in bases:
        resource = trace.event(m).resource
        for i in range(j - 1, 0, -1):
            candidate = trace.event(i)
            if candidate.resource != resource or candidate.process == process:
                continue
            if i < m:
                clear = all(
                    trace.event(k).resource != resource
                    for k in range(i + 1, j) if k != m
                )
            else:
                clear = all(
                    trace.event(k).resource != resource
                    for k in range(i + 1, j)
                )
            if clear:
                found.add(i)
    return found


def ce_predecessors(trace: EventTrace, j: int, model: SystemModel,
                    *, lsru_strict: bool = False) -> set[DependencyEdge]:
    """CE edges into event ``j``: LRU and LSRU predecessors whose pairing
    with ``j`` instantiates some cause-effect rule of the model."""
    target = trace.event(j)
    lru = lru_predecessors(trace, j, model)
    lsru = lsru_predecessors(trace, j, model, strict=lsru_strict)
    edges: set[DependencyEdge] = set()
    for i in lru | lsru:
        cause = trace.event(i)
        if any(matches_rule(rule, cause, target, model) for rule in model.ce_rules):
            base = DependencyKind.LRU if i in lru else DependencyKind.LSRU
            edges.add(DependencyEdge(i, j, DependencyKind.CE, base))
    return edges


def all_dependencies(trace: EventTrace, j: int, model: SystemModel,
                     mode: SliceMode | str = SliceMode.BASIC,
                     *, lsru_strict: bool = False) -> set[DependencyEdge]:
    """Every dependency edge into event ``j`` for the given slicing mode.

    Basic mode combines COS, LRU, and LSRU. Cause-effect mode combines
    COS with CE, dropping unrefined LRU and LSRU edges. The same index
    may appear under several kinds; each kind is a distinct edge.
    """
    mode = SliceMode(mode)
    edges: set[DependencyEdge] = set()
    cos = cos_predecessor(trace, j)
    if cos is not None:
        edges.add(DependencyEdge(cos, j, DependencyKind.COS))
    if mode is SliceMode.BASIC:
        for i in lru_predecessors(trace, j, model):
            edges.add(DependencyEdge(i, j, DependencyKind.LRU))
        for i in lsru_predecessors(trace, j, model, strict=lsru_strict):
            edges.add(DependencyEdge(i, j, DependencyKind.LSRU))
    else:
        edges |= ce_predecessors(trace, j, model, lsru_strict=lsru_strict)
    return edges
