"""HTTP facade over sessions: one writer per session, many readers.

State lives in process memory.  Each session carries its own lock;
mutations are applied and journaled under it before the response is
acknowledged, and reads take the same lock so a board is never seen
half-updated.  Sessions are independent: locking one never blocks
another.
"""

from __future__ import annotations

import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .fixtures import fixture_path
from .model import ModelError, SystemModel
from .dsl import parse_model
from .scale import ScaleError
from .session import (
    Session,
    SessionError,
    add_observation,
    create_session,
    get_board,
    record_verdict,
    what_if,
)

__all__ = ["create_app"]


class CreateSessionBody(BaseModel):
    model: str  # a served model's name, or full model text
    observations: str


class ObservationBody(BaseModel):
    component: str
    output: str
    state: str
    polarity: str  # "present" | "absent"
    level: str


class VerdictBody(BaseModel):
    label: str
    reason: str = ""


class _Registry:
    def __init__(self) -> None:
        self._sessions: dict[str, tuple[Session, threading.Lock]] = {}
        self._lock = threading.Lock()

    def add(self, session: Session) -> Session:
        with self._lock:
            base, n = session.id, 2
            while session.id in self._sessions:
                session.id = f"{base}-{n}"
                n += 1
            self._sessions[session.id] = (session, threading.Lock())
        return session

    def get(self, session_id: str) -> tuple[Session, threading.Lock]:
        with self._lock:
            entry = self._sessions.get(session_id)
        if entry is None:
            raise HTTPException(404, f"unknown session {session_id!r}")
        return entry


def _bad_request(err: Exception) -> HTTPException:
    detail: dict = {"message": str(err)}
    span = getattr(err, "span", None)
    if span is not None:
        detail["span"] = {
            "file": span.file,
            "line": span.line,
            "column": span.column,
        }
    return HTTPException(400, detail)


def _topology_json(model: SystemModel) -> dict:
    return {
        "components": [
            {
                "name": comp.name,
                "config_states": list(comp.config_states or ()),
                "faults": list(comp.faults),
                "params": [
                    {
                        "name": p.name,
                        "direction": p.direction,
                        "kind": p.kind,
                        "states": list(p.states),
                        "observable": p.observable,
                    }
                    for p in comp.params
                ],
            }
            for comp in model.components
        ],
        "links": [
            {
                "source": {
                    "component": link.source.component,
                    "param": link.source.param,
                },
                "target": {
                    "component": link.target.component,
                    "param": link.target.param,
                },
            }
            for link in model.links
        ],
    }


def create_app(models_dir: str | Path | None = None) -> FastAPI:
    """Build the service around a directory of .pdm model files."""
    directory = (
        Path(models_dir)
        if models_dir is not None
        else Path(fixture_path("solar_array.pdm")).parent
    )
    if not directory.is_dir():
        raise ModelError(f"model directory {str(directory)!r} does not exist")

    app = FastAPI(title="possdiag", docs_url=None, redoc_url=None)
    registry = _Registry()

    def model_files() -> dict[str, Path]:
        return {p.stem: p for p in sorted(directory.glob("*.pdm"))}

    def resolve_model_text(name_or_text: str) -> str:
        path = model_files().get(name_or_text)
        return path.read_text() if path is not None else name_or_text

    @app.get("/models")
    def list_models() -> dict:
        return {"models": sorted(model_files())}

    @app.get("/models/{name}/topology")
    def model_topology(name: str) -> dict:
        path = model_files().get(name)
        if path is None:
            raise HTTPException(404, f"unknown model {name!r}")
        model, diags = parse_model(path.read_text(), file=path.name)
        if model is None:
            raise HTTPException(
                500, f"model {name!r} does not parse: {diags[0].message}"
            )
        return _topology_json(model)

    @app.post("/sessions")
    def open_session(body: CreateSessionBody) -> dict:
        try:
            session = registry.add(
                create_session(resolve_model_text(body.model), body.observations)
            )
        except (ModelError, ScaleError, SessionError) as err:
            raise _bad_request(err) from None
        return {"session_id": session.id, "revision": session.revision}

    @app.get("/sessions/{session_id}/board")
    def board(session_id: str, revision: int | None = None) -> dict:
        session, lock = registry.get(session_id)
        with lock:
            payload = get_board(session).to_json(session.scale)
            payload["changed"] = revision != session.revision
        return payload

    @app.get("/sessions/{session_id}/probes")
    def probes(session_id: str) -> dict:
        session, lock = registry.get(session_id)
        with lock:
            snapshot = get_board(session)
            return {
                "session_id": session.id,
                "revision": session.revision,
                "probes": [
                    snapshot.probe_json(p, session.scale)
                    for p in snapshot.probes
                ],
            }

    @app.post("/sessions/{session_id}/observations")
    def observe(session_id: str, body: ObservationBody) -> dict:
        session, lock = registry.get(session_id)
        with lock:
            try:
                add_observation(
                    session,
                    body.component,
                    body.output,
                    body.state,
                    body.polarity == "present",
                    body.level,
                )
            except (ModelError, ScaleError, SessionError) as err:
                raise _bad_request(err) from None
            payload = get_board(session).to_json(session.scale)
        return payload

    @app.post("/sessions/{session_id}/whatif")
    def whatif(session_id: str, body: ObservationBody) -> dict:
        session, lock = registry.get(session_id)
        with lock:
            try:
                snapshot = what_if(
                    session,
                    body.component,
                    body.output,
                    body.state,
                    body.polarity == "present",
                    body.level,
                )
            except (ModelError, ScaleError, SessionError) as err:
                raise _bad_request(err) from None
            payload = snapshot.to_json(session.scale)
            payload["hypothetical"] = True
        return payload

    @app.post("/sessions/{session_id}/verdicts")
    def verdict(session_id: str, body: VerdictBody) -> dict:
        session, lock = registry.get(session_id)
        with lock:
            try:
                record_verdict(session, body.label, body.reason)
            except (ModelError, ScaleError, SessionError) as err:
                raise _bad_request(err) from None
            return {
                "session_id": session.id,
                "revision": session.revision,
                "label": body.label,
                "reason": body.reason,
            }

    @app.get("/sessions/{session_id}/journal")
    def journal(session_id: str) -> dict:
        session, lock = registry.get(session_id)
        with lock:
            return {
                "session_id": session.id,
                "revision": session.revision,
                "lines": list(session.journal),
            }

    return app
