"""System models: resource classes, state transition diagrams, resource
declarations, may-interact pairs, and cause-effect rules.

The model is the static side of the analysis. It says which resources
exist, which are active (they perform operations) and which are passive
(they are acted upon), what state transitions each resource class
admits, and which transitions of one class are declared to possibly
cause transitions of another. Models load from a JSON document and are
immutable afterwards.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Collection, Iterable

from .events import Event, EventTrace, Violation, ViolationKind


class ModelLoadError(ValueError):
    """Model content is malformed or internally inconsistent."""


class UnknownResourceError(ValueError):
    """A query named a resource the model does not declare."""

    def __init__(self, resource_id: str) -> None:
        super().__init__(f"unknown resource {resource_id!r}")
        self.resource_id = resource_id


class ResourceKind(str, Enum):
    ACTIVE = "active"
    PASSIVE = "passive"


@dataclass(frozen=True, slots=True)
class StateTransitionDiagram:
    """States, operations, and legal (operation, from, to) triples for one
    resource class."""

    states: frozenset[str]
    operations: frozenset[str]
    transitions: frozenset[tuple[str, str, str]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "operations", frozenset(self.operations))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        for oper, src, dst in self.transitions:
            if oper not in self.operations:
                raise ModelLoadError(f"transition names undeclared operation {oper!r}")
            for state in (src, dst):
                if state not in self.states:
                    raise ModelLoadError(f"transition names undeclared state {state!r}")

    def allows(self, operation: str, old_state: str, new_state: str) -> bool:
        return (operation, old_state, new_state) in self.transitions


@dataclass(frozen=True, slots=True)
class ResourceClass:
    name: str
    std: StateTransitionDiagram


@dataclass(frozen=True, slots=True)
class ResourceDecl:
    id: str
    class_name: str
    kind: ResourceKind


@dataclass(frozen=True, slots=True)
class MayInteract:
    """Ordered (actor, target) pairs: activity of the actor resource may
    change the state of the target resource."""

    pairs: frozenset[tuple[str, str]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", frozenset(self.pairs))


@dataclass(frozen=True, slots=True)
class TransitionPattern:
    """A constraint on events of one resource class.

    Absent fields are wildcards; at least one of operation, from_state,
    to_state must be present so the pattern says something about the
    transition itself.
    """

    class_name: str
    operation: str | None = None
    from_state: str | None = None
    to_state: str | None = None

    def __post_init__(self) -> None:
        if self.operation is None and self.from_state is None and self.to_state is None:
            raise ModelLoadError(
                f"pattern on class {self.class_name!r} must constrain at least "
                "one of operation, from_state, to_state"
            )


@dataclass(frozen=True, slots=True)
class CauseEffectRule:
    """Declares that events matching ``cause`` may be responsible for
    events matching ``effect`` on an active resource."""

    cause: TransitionPattern
    effect: TransitionPattern
    label: str | None = None


@dataclass(frozen=True)
class SystemModel:
    """Validated, immutable collection of classes, resources, interaction
    pairs, and cause-effect rules.

    ``permissive`` controls what happens when a query names an undeclared
    resource: strict models (the default) raise
    :class:`UnknownResourceError`, permissive ones fall back to treating
    any identifier seen in a process field as active.
    """

    classes: tuple[ResourceClass, ...] = ()
    resources: tuple[ResourceDecl, ...] = ()
    may_interact: MayInteract = MayInteract(frozenset())
    ce_rules: tuple[CauseEffectRule, ...] = ()
    permissive: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "classes", tuple(sorted(self.classes, key=lambda c: c.name))
        )
        object.__setattr__(
            self, "resources", tuple(sorted(self.resources, key=lambda r: r.id))
        )
        object.__setattr__(self, "ce_rules", tuple(self.ce_rules))
        self._validate()

    def _validate(self) -> None:
        names = [cls.name for cls in self.classes]
        if len(set(names)) != len(names):
            dup = next(n for n in names if names.count(n) > 1)
            raise ModelLoadError(f"duplicate resource class {dup!r}")
        ids = [decl.id for decl in self.resources]
        if len(set(ids)) != len(ids):
            dup = next(i for i in ids if ids.count(i) > 1)
            raise ModelLoadError(f"duplicate resource id {dup!r}")
        by_name = {cls.name: cls for cls in self.classes}
        for decl in self.resources:
            if decl.class_name not in by_name:
                raise ModelLoadError(
                    f"resource {decl.id!r} references undeclared class "
                    f"{decl.class_name!r}"
                )
        declared = set(ids)
        for actor, target in self.may_interact.pairs:
            for rid in (actor, target):
                if rid not in declared:
                    raise ModelLoadError(
                        f"may-interact pair ({actor!r}, {target!r}) references "
                        f"undeclared resource {rid!r}"
                    )
        active_classes = {
            decl.class_name for decl in self.resources
            if decl.kind is ResourceKind.ACTIVE
        }
        for rule in self.ce_rules:
            for side, pattern in (("cause", rule.cause), ("effect", rule.effect)):
                cls = by_name.get(pattern.class_name)
                if cls is None:
                    raise ModelLoadError(
                        f"rule {side} references undeclared class "
                        f"{pattern.class_name!r}"
                    )
                if pattern.operation is not None and pattern.operation not in cls.std.operations:
                    raise ModelLoadError(
                        f"rule {side} names operation {pattern.operation!r} "
                        f"not in class {cls.name!r}"
                    )
                for state in (pattern.from_state, pattern.to_state):
                    if state is not None and state not in cls.std.states:
                        raise ModelLoadError(
                            f"rule {side} names state {state!r} not in class "
                            f"{cls.name!r}"
                        )
            if rule.effect.class_name not in active_classes:
                raise ModelLoadError(
                    f"rule effect class {rule.effect.class_name!r} has no "
                    "active resource"
                )

    @cached_property
    def _classes_by_name(self) -> dict[str, ResourceClass]:
        return {cls.name: cls for cls in self.classes}

    @cached_property
    def _resources_by_id(self) -> dict[str, ResourceDecl]:
        return {decl.id: decl for decl in self.resources}

    def resource_class(self, name: str) -> ResourceClass:
        try:
            return self._classes_by_name[name]
        except KeyError:
            raise ModelLoadError(f"unknown resource class {name!r}") from None

    def resource(self, resource_id: str) -> ResourceDecl | None:
        return self._resources_by_id.get(resource_id)

    def is_active(self, resource_id: str,
                  processes: Collection[str] | None = None) -> bool:
        """Whether ``resource_id`` can perform operations.

        Declared resources answer from their declaration. Undeclared ones
        raise in strict models; in permissive models they are considered
        active when they appear in ``processes`` (the identifiers seen in
        a trace's process column).
        """
        decl = self._resources_by_id.get(resource_id)
        if decl is not None:
            return decl.kind is ResourceKind.ACTIVE
        if self.permissive and processes is not None:
            return resource_id in processes
        raise UnknownResourceError(resource_id)

    def with_rules(self, rules: Iterable[CauseEffectRule]) -> "SystemModel":
        """A copy of this model with the cause-effect rule list replaced."""
        return replace(self, ce_rules=tuple(rules))


def _pattern_matches(pattern: TransitionPattern, event: Event,
                     model: SystemModel) -> bool:
    decl = model.resource(event.resource)
    if decl is None or decl.class_name != pattern.class_name:
        return False
    if pattern.operation is not None and event.operation != pattern.operation:
        return False
    if pattern.from_state is not None and event.old_state != pattern.from_state:
        return False
    if pattern.to_state is not None and event.new_state != pattern.to_state:
        return False
    return True


def matches_rule(rule: CauseEffectRule, cause_event: Event, effect_event: Event,
                 model: SystemModel) -> bool:
    """Whether the event pair instantiates the rule: each event's resource
    belongs to the pattern's class and its (operation, old state, new
    state) satisfies every present pattern field."""
    return (_pattern_matches(rule.cause, cause_event, model)
            and _pattern_matches(rule.effect, effect_event, model))


def validate_against_model(trace: EventTrace, model: SystemModel) -> list[Violation]:
    """Check a trace against the model.

    Emits one violation per problem: undeclared resource, operation
    unknown to the resource's class, transition triple absent from the
    class diagram, or an old state that contradicts the previous event on
    the same resource. Violations are data; nothing raises.
    """
    violations: list[Violation] = []
    last_state: dict[str, str] = {}
    for event in trace:
        decl = model.resource(event.resource)
        if decl is None:
            violations.append(Violation(
                event.index, ViolationKind.UNKNOWN_RESOURCE,
                f"resource {event.resource!r} is not declared in the model",
            ))
        else:
            std = model.resource_class(decl.class_name).std
            if event.operation not in std.operations:
                violations.append(Violation(
                    event.index, ViolationKind.UNKNOWN_OPERATION,
                    f"operation {event.operation!r} is not defined for class "
                    f"{decl.class_name!r}",
                ))
            elif not std.allows(event.operation, event.old_state, event.new_state):
                violations.append(Violation(
                    event.index, ViolationKind.ILLEGAL_TRANSITION,
                    f"class {decl.class_name!r} has no transition "
                    f"({event.operation}, {event.old_state}, {event.new_state})",
                ))
        previous = last_state.get(event.resource)
        if previous is not None and event.old_state != previous:
            violations.append(Violation(
                event.index, ViolationKind.STATE_DISCONTINUITY,
                f"old state {event.old_state!r} of {event.resource!r} does not "
                f"match previous new state {previous!r}",
            ))
        last_state[event.resource] = event.new_state
    return violations


# ---------------------------------------------------------------------------
# JSON encoding


def _require(obj: dict, key: str, context: str):
    if key not in obj:
        raise ModelLoadError(f"{context}: missing key {key!r}")
    return obj[key]


def _pattern_from_obj(obj: dict, context: str) -> TransitionPattern:
    if not isinstance(obj, dict):
        raise ModelLoadError(f"{context}: expected an object")
    unknown = set(obj) - {"class", "op", "from", "to"}
    if unknown:
        raise ModelLoadError(f"{context}: unexpected key {sorted(unknown)[0]!r}")
    return TransitionPattern(
        class_name=_require(obj, "class", context),
        operation=obj.get("op"),
        from_state=obj.get("from"),
        to_state=obj.get("to"),
    )


def _pattern_to_obj(pattern: TransitionPattern) -> dict:
    obj: dict = {"class": pattern.class_name}
    if pattern.operation is not None:
        obj["op"] = pattern.operation
    if pattern.from_state is not None:
        obj["from"] = pattern.from_state
    if pattern.to_state is not None:
        obj["to"] = pattern.to_state
    return obj


def rule_from_obj(obj: dict, context: str = "rule") -> CauseEffectRule:
    if not isinstance(obj, dict):
        raise ModelLoadError(f"{context}: expected an object")
    return CauseEffectRule(
        cause=_pattern_from_obj(_require(obj, "cause", context), f"{context} cause"),
        effect=_pattern_from_obj(_require(obj, "effect", context), f"{context} effect"),
        label=obj.get("label"),
    )


def rule_to_obj(rule: CauseEffectRule) -> dict:
    obj = {"cause": _pattern_to_obj(rule.cause), "effect": _pattern_to_obj(rule.effect)}
    if rule.label is not None:
        obj["label"] = rule.label
    return obj


def parse_model_obj(data: dict, *, strict_interaction: bool = False) -> SystemModel:
    """Build a model from already-decoded JSON. See :func:`parse_model`."""
    if not isinstance(data, dict):
        raise ModelLoadError("expected a JSON object at the top level")
    classes = []
    for entry in data.get("classes", ()):
        name = _require(entry, "name", "class")
        transitions = []
        for tr in entry.get("transitions", ()):
            transitions.append((
                _require(tr, "op", f"class {name} transition"),
                _require(tr, "from", f"class {name} transition"),
                _require(tr, "to", f"class {name} transition"),
            ))
        classes.append(ResourceClass(
            name=name,
            std=StateTransitionDiagram(
                states=frozenset(entry.get("states", ())),
                operations=frozenset(entry.get("operations", ())),
                transitions=frozenset(transitions),
            ),
        ))
    resources = []
    for entry in data.get("resources", ()):
        rid = _require(entry, "id", "resource")
        kind_text = _require(entry, "kind", f"resource {rid}")
        try:
            kind = ResourceKind(kind_text)
        except ValueError:
            raise ModelLoadError(
                f"resource {rid!r}: kind must be 'active' or 'passive', "
                f"got {kind_text!r}"
            ) from None
        resources.append(ResourceDecl(
            id=rid,
            class_name=_require(entry, "class", f"resource {rid}"),
            kind=kind,
        ))
    pairs = []
    for pair in data.get("may_interact", ()):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ModelLoadError(f"may_interact entry {pair!r} is not a pair")
        pairs.append((pair[0], pair[1]))
    rules = [
        rule_from_obj(entry, f"rule {position}")
        for position, entry in enumerate(data.get("cause_effect_rules", ()), start=1)
    ]
    model = SystemModel(
        classes=tuple(classes),
        resources=tuple(resources),
        may_interact=MayInteract(frozenset(pairs)),
        ce_rules=tuple(rules),
        permissive=bool(data.get("permissive", False)),
    )
    if strict_interaction:
        _check_rule_interactions(model)
    return model


def _check_rule_interactions(model: SystemModel) -> None:
    """Reject rules between classes with no declared may-interact pair."""
    class_pairs = set()
    for actor, target in model.may_interact.pairs:
        actor_decl = model.resource(actor)
        target_decl = model.resource(target)
        if actor_decl and target_decl:
            class_pairs.add((actor_decl.class_name, target_decl.class_name))
    for rule in model.ce_rules:
        if (rule.cause.class_name, rule.effect.class_name) not in class_pairs:
            raise ModelLoadError(
                f"rule between classes {rule.cause.class_name!r} and "
                f"{rule.effect.class_name!r} has no may-interact pair"
            )


def parse_model(text: str, *, strict_interaction: bool = False) -> SystemModel:
    """Parse model JSON into a validated :class:`SystemModel`.

    ``strict_interaction`` additionally rejects cause-effect rules whose
    class pair has no declared may-interact pair.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelLoadError(f"invalid JSON: {exc}") from exc
    return parse_model_obj(data, strict_interaction=strict_interaction)


def model_to_obj(model: SystemModel) -> dict:
    obj: dict = {
        "classes": [
            {
                "name": cls.name,
                "states": sorted(cls.std.states),
                "operations": sorted(cls.std.operations),
                "transitions": [
                    {"op": oper, "from": src, "to": dst}
                    for oper, src, dst in sorted(cls.std.transitions)
                ],
            }
            for cls in model.classes
        ],
        "resources": [
            {"id": decl.id, "class": decl.class_name, "kind": decl.kind.value}
            for decl in model.resources
        ],
        "may_interact": [list(pair) for pair in sorted(model.may_interact.pairs)],
        "cause_effect_rules": [rule_to_obj(rule) for rule in model.ce_rules],
    }
    if model.permissive:
        obj["permissive"] = True
    return obj


def serialize_model(model: SystemModel) -> str:
    """Render a model to JSON text. Round-trips through :func:`parse_model`."""
    return json.dumps(model_to_obj(model), indent=2, sort_keys=True) + "\n"
