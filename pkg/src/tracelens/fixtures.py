"""Bundled sample inputs: a 37-event lock contention trace and its model.

The trace records two processes contending for file locks until one
blocks and is later signaled back to life. It exercises every dependency
kind and is small enough to check by hand, so the test suite and the
documentation both build on it.
"""

from __future__ import annotations

from importlib.resources import files

from .events import EventTrace, TraceFormat, parse_trace
from .model import CauseEffectRule, SystemModel, TransitionPattern, parse_model

_DATA = files("tracelens.data")

TRACE_FILENAME = "lock_contention.tsv"
MODEL_FILENAME = "lock_contention_model.json"


def trace_path():
    return _DATA / TRACE_FILENAME


def model_path():
    return _DATA / MODEL_FILENAME


def sample_trace_text() -> str:
    return trace_path().read_text(encoding="utf-8")


def sample_model_text() -> str:
    return model_path().read_text(encoding="utf-8")


def sample_trace() -> EventTrace:
    return parse_trace(sample_trace_text(), TraceFormat.TSV)


def sample_model() -> SystemModel:
    return parse_model(sample_model_text())


def relock_rules() -> tuple[CauseEffectRule, ...]:
    """Alternative rule set where re-locking an already locked file is
    the suspicious cause.

    Under these rules the lock-refresh event joins the cause-effect
    slice of the sample trace, growing it from 6 events to 7. Kept as a
    named fixture so the two readings can be compared side by side.
    """
    return (
        CauseEffectRule(
            cause=TransitionPattern("File", operation="Lock",
                                    from_state="Locked", to_state="Locked"),
            effect=TransitionPattern("Process",
                                     from_state="Running", to_state="Blocked"),
            label="re-locking a held file blocks a process",
        ),
        CauseEffectRule(
            cause=TransitionPattern("File", operation="Unlock",
                                    from_state="Locked", to_state="Open"),
            effect=TransitionPattern("Process",
                                     from_state="Blocked", to_state="Running"),
            label="releasing a file lock resumes a blocked process",
        ),
    )


def sample_model_with_relock_rules() -> SystemModel:
    return sample_model().with_rules(relock_rules())
