"""tracelens: reduce event traces of multi-process systems for debugging.

Given a trace of (process, operation, resource, old state, new state)
records and a model of the resources involved, tracelens computes which
earlier events may have influenced a suspect event and slices the trace
down to just those. See the README for the CLI and the HTTP explorer.
"""

from .engine import (
    DependencyEdge,
    DependencyKind,
    SliceMode,
    all_dependencies,
    ce_predecessors,
    cos_predecessor,
    lru_predecessors,
    lsru_predecessors,
)
from .events import (
    Event,
    EventTrace,
    TraceFormat,
    TraceParseError,
    Violation,
    ViolationKind,
    parse_trace,
    serialize_trace,
)
from .model import (
    CauseEffectRule,
    MayInteract,
    ModelLoadError,
    ResourceClass,
    ResourceDecl,
    ResourceKind,
    StateTransitionDiagram,
    SystemModel,
    TransitionPattern,
    UnknownResourceError,
    matches_rule,
    parse_model,
    serialize_model,
    validate_against_model,
)
from .slicer import (
    NotSliceMemberError,
    SliceResult,
    SliceStats,
    explain,
    result_from_json,
    result_to_json,
    slice_trace,
    to_dot,
)

__version__ = "0.1.0"

__all__ = [
    "CauseEffectRule",
    "DependencyEdge",
    "DependencyKind",
    "Event",
    "EventTrace",
    "MayInteract",
    "ModelLoadError",
    "NotSliceMemberError",
    "ResourceClass",
    "ResourceDecl",
    "ResourceKind",
    "SliceMode",
    "SliceResult",
    "SliceStats",
    "StateTransitionDiagram",
    "SystemModel",
    "TraceFormat",
    "TraceParseError",
    "TransitionPattern",
    "UnknownResourceError",
    "Violation",
    "ViolationKind",
    "all_dependencies",
    "ce_predecessors",
    "cos_predecessor",
    "explain",
    "lru_predecessors",
    "lsru_predecessors",
    "matches_rule",
    "parse_model",
    "parse_trace",
    "result_from_json",
    "result_to_json",
    "serialize_model",
    "serialize_trace",
    "slice_trace",
    "to_dot",
    "validate_against_model",
]
