"""HTTP session service: create sessions from uploaded traces, inspect state, run commands.

Commands travel as text in the session command grammar so the CLI, the replay
files, and the API share one parser. Sessions are in-memory; one lock per
session serializes its commands.
"""
from __future__ import annotations

import threading
import time
import uuid
from typing import Any

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from .automaton import Mode, to_dot
from .dataio import parse_traces, session_document
from .errors import (
    BadCommandSyntaxError,
    CommandError,
    EmptySampleError,
    InconsistentSampleError,
    MergeloopError,
    TraceParseError,
)
from .heuristics import HeuristicParams, heuristic_by_name
from .session import Session

PAGE_SIZE = 50


class ApiError(Exception):
    def __init__(self, status: int, error: str, message: str):
        super().__init__(message)
        self.status = status
        self.error = error
        self.message = message


class SessionRuntime:
    def __init__(self, session: Session, config: dict):
        self.id = uuid.uuid4().hex
        self.created_at = time.time()
        self.session = session
        self.config = config
        self.lock = threading.Lock()


def _params_from(config: dict) -> HeuristicParams:
    raw = config.get("params") or {}
    if not isinstance(raw, dict):
        raise ApiError(422, "bad-config", "params must be an object")
    allowed = {"state_count", "symbol_count", "lowerbound", "sinkson"}
    unknown = set(raw) - allowed
    if unknown:
        raise ApiError(422, "bad-config", f"unknown params: {sorted(unknown)}")
    try:
        return HeuristicParams(
            state_count=int(raw.get("state_count", 0)),
            symbol_count=int(raw.get("symbol_count", 0)),
            lowerbound=int(raw.get("lowerbound", 0)),
            sinkson=bool(raw.get("sinkson", False)),
        )
    except (TypeError, ValueError) as exc:
        raise ApiError(422, "bad-config", f"bad parameter value: {exc}") from exc


def _state_doc(runtime: SessionRuntime, page: int) -> dict:
    doc = session_document(runtime.session)
    total = doc["candidate_total"]
    start = (page - 1) * PAGE_SIZE
    doc["candidates"] = doc["candidates"][start:start + PAGE_SIZE]
    doc["page"] = page
    doc["page_size"] = PAGE_SIZE
    doc["id"] = runtime.id
    return doc


def create_app() -> FastAPI:
    app = FastAPI(title="mergeloop", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, SessionRuntime] = {}
    registry_lock = threading.Lock()

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status,
                            content={"error": exc.error, "message": exc.message})

    def lookup(session_id: str) -> SessionRuntime:
        with registry_lock:
            runtime = sessions.get(session_id)
        if runtime is None:
            raise ApiError(404, "unknown-session", f"no session {session_id!r}")
        return runtime

    @app.get("/api/sessions")
    def list_sessions() -> list[dict]:
        with registry_lock:
            rows = sorted(sessions.values(), key=lambda r: r.created_at)
        return [{"id": r.id, "created_at": r.created_at, "config": r.config} for r in rows]

    @app.post("/api/sessions", status_code=201)
    def create_session(body: dict[str, Any]) -> dict:
        traces = body.get("traces")
        if not isinstance(traces, str) or not traces.strip():
            raise ApiError(400, "parse-error", "body needs a non-empty 'traces' text field")
        heuristic_name = body.get("heuristic", "mealy")
        try:
            heuristic = heuristic_by_name(heuristic_name)
        except KeyError as exc:
            raise ApiError(422, "bad-config", str(exc)) from exc
        mode = body.get("mode", heuristic.mode.value)
        if mode != heuristic.mode.value:
            raise ApiError(422, "bad-config",
                           f"heuristic {heuristic.name!r} expects mode {heuristic.mode.value!r}")
        params = _params_from(body)
        try:
            sample = parse_traces(traces, Mode(mode))
            session = Session(sample, params, heuristic)
        except TraceParseError as exc:
            where = f" (line {exc.line})" if exc.line else ""
            raise ApiError(400, "parse-error", f"{exc}{where}") from exc
        except (EmptySampleError, InconsistentSampleError) as exc:
            raise ApiError(400, "parse-error", str(exc)) from exc
        runtime = SessionRuntime(session, {
            "heuristic": heuristic.name,
            "mode": mode,
            "params": {
                "state_count": params.state_count,
                "symbol_count": params.symbol_count,
                "lowerbound": params.lowerbound,
                "sinkson": params.sinkson,
            },
        })
        with registry_lock:
            sessions[runtime.id] = runtime
        with runtime.lock:
            return _state_doc(runtime, page=1)

    @app.get("/api/sessions/{session_id}")
    def get_state(session_id: str, page: int = Query(default=1, ge=1)) -> dict:
        runtime = lookup(session_id)
        with runtime.lock:
            return _state_doc(runtime, page)

    @app.post("/api/sessions/{session_id}/commands")
    def post_command(session_id: str, body: dict[str, Any]) -> dict:
        runtime = lookup(session_id)
        text = body.get("command")
        if not isinstance(text, str):
            raise ApiError(400, "bad-command-syntax", "body needs a 'command' text field")
        with runtime.lock:
            try:
                runtime.session.apply(text)
            except BadCommandSyntaxError as exc:
                raise ApiError(400, "bad-command-syntax", str(exc)) from exc
            except CommandError as exc:
                raise ApiError(409, exc.cause, str(exc)) from exc
            except MergeloopError as exc:
                raise ApiError(409, "command-error", str(exc)) from exc
            return _state_doc(runtime, page=1)

    @app.get("/api/sessions/{session_id}/dot")
    def get_dot(session_id: str, which: str = Query(default="current")) -> Response:
        if which not in ("current", "previous"):
            raise ApiError(400, "bad-command-syntax", "which must be current or previous")
        runtime = lookup(session_id)
        with runtime.lock:
            if which == "current":
                dot = to_dot(runtime.session.automaton)
            else:
                dot = runtime.session.previous_dot()
                if dot is None:
                    raise ApiError(409, "no-previous-step", "session is at step 0")
        return Response(content=dot, media_type="text/vnd.graphviz")

    @app.delete("/api/sessions/{session_id}")
    def delete_session(session_id: str) -> dict:
        with registry_lock:
            runtime = sessions.pop(session_id, None)
        if runtime is None:
            raise ApiError(404, "unknown-session", f"no session {session_id!r}")
        return {"deleted": session_id}

    return app


def serve(host: str, port: int) -> None:  # pragma: no cover - exercised manually
    import uvicorn

    uvicorn.run(create_app(), host=host, port=port, log_level="warning")
