"""Independent oracles and random scenario generation.

Each oracle translates its dependency definition quantifier by
quantifier, enumerating candidate pairs directly instead of scanning
backward the way the production detectors do. Slice membership is
checked against naive iterate-to-stability closure over oracle-computed
edges. Detectors and oracles must agree everywhere; the acceptance
suite runs them against a thousand random scenarios.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from tracelens.events import Event, EventTrace
from tracelens.model import (
    CauseEffectRule,
    MayInteract,
    ResourceClass,
    ResourceDecl,
    ResourceKind,
    StateTransitionDiagram,
    SystemModel,
    TransitionPattern,
)


def oracle_cos(trace: EventTrace, j: int) -> set[int]:
    ej = trace.event(j)
    found = set()
    for i in range(1, j):
        ei = trace.event(i)
        cond1 = ei.resource == ej.resource and ei.new_state == ej.old_state
        cond2 = ei.old_state != ei.new_state
        cond3 = all(
            trace.event(k).resource != ei.resource
            or (trace.event(k).old_state == ei.new_state
                and trace.event(k).new_state == ei.new_state)
            for k in range(i + 1, j)
        )
        if cond1 and cond2 and cond3:
            found.add(i)
    return found


def oracle_lru(trace: EventTrace, j: int, model: SystemModel) -> set[int]:
    ej = trace.event(j)
    cond1 = (model.is_active(ej.resource, processes=trace.process_ids)
             and ej.old_state != ej.new_state)
    if not cond1:
        return set()
    found = set()
    for i in range(1, j):
        ei = trace.event(i)
        cond2 = ei.process == ej.resource
        cond3 = all(
            trace.event(k).process != ej.resource
            or ei.resource != trace.event(k).resource
            for k in range(i + 1, j)
        )
        if cond2 and cond3:
            found.add(i)
    return found


def oracle_lsru(trace: EventTrace, j: int, model: SystemModel,
                *, strict: bool = False) -> set[int]:
    ej = trace.event(j)
    lru = oracle_lru(trace, j, model)
    found = set()
    for i in range(1, j):
        ei = trace.event(i)
        for m in lru:
            em = trace.event(m)
            if em.process == ei.process or em.resource != ei.resource:
                continue
            if strict:
                if i < m:
                    cond3 = all(
                        trace.event(k).resource != ei.resource
                        for k in range(i + 1, j) if k != m
                    )
                else:
                    cond3 = all(
                        trace.event(k).resource != ei.resource
                        for k in range(i + 1, j)
                    )
            else:
                cond3 = all(
                    trace.event(k).process == ej.resource
                    or trace.event(k).resource != ei.resource
                    for k in range(i + 1, j)
                )
            if cond3:
                found.add(i)
                break
    return found


def _oracle_pattern_matches(pattern: TransitionPattern, event: Event,
                            model: SystemModel) -> bool:
    decl = model.resource(event.resource)
    if decl is None or decl.class_name != pattern.class_name:
        return False
    checks = (
        (pattern.operation, event.operation),
        (pattern.from_state, event.old_state),
        (pattern.to_state, event.new_state),
    )
    return all(wanted is None or wanted == got for wanted, got in checks)


def oracle_ce(trace: EventTrace, j: int, model: SystemModel,
              *, lsru_strict: bool = False) -> set[tuple[int, str]]:
    """CE predecessors of ``j`` as (index, base kind) pairs."""
    ej = trace.event(j)
    lru = oracle_lru(trace, j, model)
    lsru = oracle_lsru(trace, j, model, strict=lsru_strict)
    found = set()
    for i in lru | lsru:
        ei = trace.event(i)
        static = any(
            _oracle_pattern_matches(rule.cause, ei, model)
            and _oracle_pattern_matches(rule.effect, ej, model)
            for rule in model.ce_rules
        )
        if static:
            found.add((i, "LRU" if i in lru else "LSRU"))
    return found


def oracle_dependencies(trace: EventTrace, j: int, model: SystemModel,
                        mode: str, *, lsru_strict: bool = False
                        ) -> set[tuple[int, str, str | None]]:
    """All dependency edges into ``j`` as (from, kind, base) triples."""
    edges: set[tuple[int, str, str | None]] = set()
    for i in oracle_cos(trace, j):
        edges.add((i, "COS", None))
    if mode == "basic":
        for i in oracle_lru(trace, j, model):
            edges.add((i, "LRU", None))
        for i in oracle_lsru(trace, j, model, strict=lsru_strict):
            edges.add((i, "LSRU", None))
    else:
        for i, base in oracle_ce(trace, j, model, lsru_strict=lsru_strict):
            edges.add((i, "CE", base))
    return edges


def oracle_slice_members(trace: EventTrace, model: SystemModel, start: int,
                         mode: str,
                         edges_by_event: dict[int, set] | None = None) -> set[int]:
    """Naive whole-trace iteration to stability over oracle edges."""
    if edges_by_event is None:
        edges_by_event = {
            j: oracle_dependencies(trace, j, model, mode)
            for j in range(1, len(trace) + 1)
        }
    members = {start}
    changed = True
    while changed:
        changed = False
        for j in range(1, len(trace) + 1):
            if j not in members:
                continue
            for i, _kind, _base in edges_by_event[j]:
                if i not in members:
                    members.add(i)
                    changed = True
    return members


# ---------------------------------------------------------------------------
# Random scenarios

STATES = ("s1", "s2", "s3", "s4")
OPERATIONS = ("o1", "o2", "o3", "o4", "o5")
ACTIVE_CLASS = "Actor"
PASSIVE_CLASS = "Item"


@dataclass
class Scenario:
    trace: EventTrace
    model: SystemModel
    seed: int | None = None


def _random_pattern(rng: random.Random, class_name: str) -> TransitionPattern:
    operation = rng.choice(OPERATIONS) if rng.random() < 0.5 else None
    from_state = rng.choice(STATES) if rng.random() < 0.5 else None
    to_state = rng.choice(STATES) if rng.random() < 0.5 else None
    if operation is None and from_state is None and to_state is None:
        operation = rng.choice(OPERATIONS)
    return TransitionPattern(class_name, operation=operation,
                             from_state=from_state, to_state=to_state)


def random_scenario(rng: random.Random, max_events: int = 50,
                    seed: int | None = None) -> Scenario:
    """A random trace over up to 5 processes and 8 resources, with a
    random cause-effect rule set. States need not be continuous; the
    detectors must not assume they are."""
    n_processes = rng.randint(1, 5)
    processes = [f"P{i}" for i in range(1, n_processes + 1)]
    n_passive = rng.randint(1, max(1, 8 - n_processes))
    passives = [f"R{i}" for i in range(1, n_passive + 1)]

    events = []
    n_events = rng.randint(0, max_events)
    for index in range(1, n_events + 1):
        process = rng.choice(processes)
        resource = rng.choice(processes) if rng.random() < 0.3 else rng.choice(passives)
        old_state = rng.choice(STATES)
        new_state = old_state if rng.random() < 0.3 else rng.choice(STATES)
        events.append(Event(index, process, rng.choice(OPERATIONS), resource,
                            old_state, new_state))

    std = StateTransitionDiagram(
        states=frozenset(STATES),
        operations=frozenset(OPERATIONS),
        transitions=frozenset(),
    )
    rules = tuple(
        CauseEffectRule(
            cause=_random_pattern(rng, rng.choice((ACTIVE_CLASS, PASSIVE_CLASS))),
            effect=_random_pattern(rng, ACTIVE_CLASS),
        )
        for _ in range(rng.randint(0, 3))
    )
    model = SystemModel(
        classes=(ResourceClass(ACTIVE_CLASS, std), ResourceClass(PASSIVE_CLASS, std)),
        resources=tuple(
            [ResourceDecl(p, ACTIVE_CLASS, ResourceKind.ACTIVE) for p in processes]
            + [ResourceDecl(r, PASSIVE_CLASS, ResourceKind.PASSIVE) for r in passives]
        ),
        may_interact=MayInteract(frozenset()),
        ce_rules=rules,
    )
    return Scenario(trace=EventTrace(events), model=model, seed=seed)


def scenario_from_seed(seed: int, max_events: int = 50) -> Scenario:
    return random_scenario(random.Random(seed), max_events=max_events, seed=seed)
