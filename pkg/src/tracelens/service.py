"""HTTP explorer service.

Holds debugging sessions in memory. A session pairs one trace with one
model; slicing appends to the session's history, and the rule list can
be replaced at any time, bumping the model version so past history
entries stay attributable to the rule set that produced them.

Endpoints (all JSON):

* ``POST /sessions`` load a trace and model, or reload into an existing
  session (new model version, history preserved)
* ``GET /sessions/{id}/trace`` the trace as a JSON array
* ``POST /sessions/{id}/slice`` run a slice, record it in history
* ``GET /sessions/{id}/deps/{event}?mode=`` dependency predecessors
* ``PUT /sessions/{id}/rules`` replace the cause-effect rule list
* ``GET /sessions/{id}/history`` past slices with their model versions
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException, Response
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .cli import deps_to_json_obj
from .engine import SliceMode, all_dependencies
from .events import EventTrace, TraceParseError, parse_trace, trace_to_json_objs
from .model import (
    ModelLoadError,
    SystemModel,
    parse_model_obj,
    rule_from_obj,
)
from .slicer import canonical_json, result_to_json, slice_trace


@dataclass
class Session:
    id: str
    trace: EventTrace
    model: SystemModel
    model_version: int = 1
    history: list[dict] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def snapshot(self) -> tuple[EventTrace, SystemModel, int]:
        with self.lock:
            return self.trace, self.model, self.model_version


class LoadRequest(BaseModel):
    trace_text: str
    trace_format: str = "tsv"
    model: dict
    session_id: str | None = None


class SliceRequest(BaseModel):
    start: int
    mode: str = "basic"


def create_app() -> FastAPI:
    app = FastAPI(title="tracelens explorer", version="0.1.0")
    # The browser UI may be served from a different local port.
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def get_session(session_id: str) -> Session:
        with registry_lock:
            session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404,
                                detail=f"unknown session {session_id!r}")
        return session

    def parse_mode(mode: str) -> SliceMode:
        try:
            return SliceMode(mode)
        except ValueError:
            raise HTTPException(
                status_code=400,
                detail=f"mode must be 'basic' or 'cause-effect', got {mode!r}",
            ) from None

    @app.post("/sessions")
    def load(request: LoadRequest) -> dict:
        try:
            trace = parse_trace(request.trace_text, request.trace_format)
            model = parse_model_obj(request.model)
        except (TraceParseError, ModelLoadError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        if request.session_id is not None:
            session = get_session(request.session_id)
            with session.lock:
                session.trace = trace
                session.model = model
                session.model_version += 1
                version = session.model_version
        else:
            session = Session(id=uuid.uuid4().hex, trace=trace, model=model)
            with registry_lock:
                sessions[session.id] = session
            version = session.model_version
        return {
            "session_id": session.id,
            "trace_length": len(trace),
            "model_version": version,
        }

    @app.get("/sessions/{session_id}/trace")
    def get_trace(session_id: str) -> list[dict]:
        trace, _, _ = get_session(session_id).snapshot()
        return trace_to_json_objs(trace)

    @app.post("/sessions/{session_id}/slice")
    def run_slice(session_id: str, request: SliceRequest) -> Response:
        session = get_session(session_id)
        mode = parse_mode(request.mode)
        trace, model, version = session.snapshot()
        try:
            result = slice_trace(trace, model, request.start, mode)
        except IndexError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        with session.lock:
            session.history.append({
                "start": result.start_index,
                "mode": result.mode.value,
                "model_version": version,
                "trace_length": result.stats.trace_length,
                "slice_length": result.stats.slice_length,
                "reduction_ratio": result.stats.reduction_ratio,
            })
        return Response(content=result_to_json(result),
                        media_type="application/json")

    @app.get("/sessions/{session_id}/deps/{event}")
    def get_deps(session_id: str, event: int, mode: str = "basic") -> Response:
        slice_mode = parse_mode(mode)
        trace, model, _ = get_session(session_id).snapshot()
        try:
            edges = all_dependencies(trace, event, model, slice_mode)
        except IndexError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return Response(content=canonical_json(deps_to_json_obj(edges, event, slice_mode)),
                        media_type="application/json")

    @app.put("/sessions/{session_id}/rules")
    def put_rules(session_id: str, rules: list[dict]) -> dict:
        session = get_session(session_id)
        with session.lock:
            try:
                parsed = [
                    rule_from_obj(obj, f"rule {position}")
                    for position, obj in enumerate(rules, start=1)
                ]
                session.model = session.model.with_rules(parsed)
            except ModelLoadError as exc:
                raise HTTPException(status_code=422, detail=str(exc)) from exc
            session.model_version += 1
            return {"model_version": session.model_version}

    @app.get("/sessions/{session_id}/history")
    def get_history(session_id: str) -> dict:
        session = get_session(session_id)
        with session.lock:
            return {
                "model_version": session.model_version,
                "history": list(session.history),
            }

    return app
