"""HTTP endpoints for the browser client: sessions, moves, replays, push channel.

The UI is a thin client: every fact it renders comes from these endpoints.
State messages are produced by the engine (`state_to_message`); legality and
scores are never recomputed client-side. The push channel is server-sent
events carrying the same state message that `GET .../state` returns.
"""

from __future__ import annotations

import json
import math
import queue
import threading
import uuid
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles

from ..simcore import IllegalActionError, NUM_ACTIONS
from .replay import ReplayStore, ReplayVerificationError, resimulate
from .session import EpisodeSession, SessionError

GEOMETRY = {
    "layout": "odd-r",
    "pitch": 1.0,
    "row_step": math.sqrt(3.0) / 2.0,
    "odd_row_offset": 0.5,
}


class UISession:
    """One browser-visible game: an episode session plus push subscribers."""

    def __init__(self, session_id: str, episode: EpisodeSession):
        self.id = session_id
        self.episode = episode
        self.lock = threading.Lock()
        self.subscribers: list[queue.Queue] = []

    def snapshot(self) -> dict:
        msg = self.episode.state_message()
        msg["session_id"] = self.id
        return msg

    def broadcast(self):
        msg = self.snapshot()
        for q in list(self.subscribers):
            q.put(msg)

    def subscribe(self) -> queue.Queue:
        q: queue.Queue = queue.Queue()
        self.subscribers.append(q)
        return q

    def unsubscribe(self, q: queue.Queue):
        if q in self.subscribers:
            self.subscribers.remove(q)


class SessionManager:
    def __init__(self, store: ReplayStore | None):
        self.store = store
        self.sessions: dict[str, UISession] = {}
        self.lock = threading.Lock()

    def create(self, params: dict) -> UISession:
        episode = EpisodeSession(self.store)
        episode.reset(**params)
        sid = uuid.uuid4().hex[:12]
        ui = UISession(sid, episode)
        with self.lock:
            self.sessions[sid] = ui
        return ui

    def get(self, sid: str) -> UISession | None:
        return self.sessions.get(sid)

    def listing(self) -> list[dict]:
        out = []
        with self.lock:
            sessions = list(self.sessions.values())
        for ui in sessions:
            s = ui.episode.state
            out.append(
                {
                    "session_id": ui.id,
                    "size": s.rows,
                    "phase": s.phase,
                    "phase_budget": s.phase_budget,
                    "terminal": ui.episode.terminal,
                    "role": ui.episode.role.value,
                }
            )
        return out


_CREATE_KEYS = {"size", "seed", "role", "obs_mode", "opponent", "illegal_mode"}


def create_app(replay_dir: str | None = None, frontend_dir: str | None = None) -> FastAPI:
    store = ReplayStore(replay_dir) if replay_dir else None
    manager = SessionManager(store)
    app = FastAPI(title="hexcombat", docs_url=None, redoc_url=None)
    app.state.manager = manager
    app.state.store = store

    def error(status: int, code: str, message: str, **data):
        return JSONResponse({"error": {"code": code, "message": message, **data}}, status_code=status)

    @app.get("/api/health")
    def health():
        return {"ok": True}

    @app.post("/api/sessions")
    async def create_session(request: Request):
        try:
            params = await request.json()
        except json.JSONDecodeError:
            return error(400, "bad_json", "request body is not valid JSON")
        if not isinstance(params, dict):
            return error(400, "bad_request", "body must be a JSON object")
        unknown = set(params) - _CREATE_KEYS
        if unknown:
            return error(400, "bad_params", f"unknown parameters {sorted(unknown)}")
        params.setdefault("size", 5)
        try:
            ui = manager.create(params)
        except SessionError as exc:
            return error(400, exc.code, str(exc))
        return {"session_id": ui.id, "geometry": GEOMETRY, "state": ui.snapshot()}

    @app.get("/api/sessions")
    def list_sessions():
        return {"sessions": manager.listing()}

    @app.get("/api/sessions/{sid}/state")
    def session_state(sid: str):
        ui = manager.get(sid)
        if ui is None:
            return error(404, "unknown_session", f"no session {sid}")
        return ui.snapshot()

    @app.post("/api/sessions/{sid}/move")
    async def submit_move(sid: str, request: Request):
        ui = manager.get(sid)
        if ui is None:
            return error(404, "unknown_session", f"no session {sid}")
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return error(400, "bad_json", "request body is not valid JSON")
        action = body.get("action")
        if not isinstance(action, int) or not (0 <= action < NUM_ACTIONS):
            return error(400, "bad_action", f"action must be an integer in [0, 6], got {action!r}")
        with ui.lock:
            try:
                result = ui.episode.step(action)
            except SessionError as exc:
                mask = exc.data.get("legal_mask")
                extra = {"legal_mask": mask} if mask else {}
                return error(409, exc.code, str(exc), **extra)
            except IllegalActionError as exc:
                return error(409, "illegal_action", str(exc))
        ui.broadcast()
        return {
            "state": ui.snapshot(),
            "reward": result.reward,
            "terminal": result.terminal,
            "info": result.info,
        }

    @app.get("/api/sessions/{sid}/events")
    def session_events(sid: str, max_events: int | None = None):
        """SSE stream of state messages; ``max_events`` bounds it for polling clients."""
        ui = manager.get(sid)
        if ui is None:
            return error(404, "unknown_session", f"no session {sid}")

        def stream():
            q = ui.subscribe()
            sent = 0
            try:
                yield f"data: {json.dumps(ui.snapshot())}\n\n"
                sent += 1
                while max_events is None or sent < max_events:
                    try:
                        msg = q.get(timeout=1.0)
                        yield f"data: {json.dumps(msg)}\n\n"
                        sent += 1
                    except queue.Empty:
                        yield ": ping\n\n"
            finally:
                ui.unsubscribe(q)

        return StreamingResponse(stream(), media_type="text/event-stream")

    @app.post("/api/sessions/{sid}/replay")
    def save_replay(sid: str):
        ui = manager.get(sid)
        if ui is None:
            return error(404, "unknown_session", f"no session {sid}")
        if store is None:
            return error(409, "no_store", "service is running without a replay directory")
        with ui.lock:
            try:
                replay_id, _ = ui.episode.record_replay()
            except SessionError as exc:
                return error(409, exc.code, str(exc))
        return {"replay_id": replay_id}

    @app.get("/api/replays")
    def list_replays():
        if store is None:
            return {"replays": []}
        return {"replays": store.summaries()}

    @app.get("/api/replays/{replay_id}")
    def fetch_replay(replay_id: str):
        if store is None:
            return error(404, "unknown_replay", "service is running without a replay directory")
        try:
            doc = store.load(replay_id)
        except KeyError:
            return error(404, "unknown_replay", f"no replay {replay_id}")
        try:
            _, _, states = resimulate(doc, collect_states=True)
        except ReplayVerificationError as exc:
            return error(500, "corrupt_replay", str(exc))
        return {"document": doc.to_json(), "states": states, "geometry": GEOMETRY}

    if frontend_dir and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="frontend")

    return app


__all__ = ["GEOMETRY", "UISession", "SessionManager", "create_app"]
