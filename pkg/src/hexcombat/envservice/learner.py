"""Learner wire protocol: newline-delimited JSON over a byte stream.

Requests are single JSON objects per line with a "type" of "reset", "step",
"record_replay", or "close". Replies are canonical JSON (sorted keys, compact
separators) so identical episodes produce byte-identical transcripts. Errors
are replied as {"error": {"code": ..., "message": ...}} and never close the
connection or crash the server.

Each connection owns one session; concurrent connections are fully isolated.
The observation is sent as nested arrays by default, or as base64-encoded
little-endian float32 when the reset requests "obs_encoding": "f32b64".
"""

from __future__ import annotations

import json
import socket
import socketserver
import threading

from ..observation import tensor_to_b64, tensor_to_nested
from ..simcore import IllegalActionError, NUM_ACTIONS
from .replay import ReplayStore, canonical_dumps
from .session import EpisodeSession, SessionError, StepResult

_RESET_KEYS = {
    "size", "spec", "seed", "role", "obs_mode", "opponent", "illegal_mode", "obs_encoding",
}


def step_payload(result: StepResult, encoding: str) -> dict:
    obs = result.observation
    if encoding == "f32b64":
        observation = {"b64": tensor_to_b64(obs), "dtype": "<f4"}
    else:
        observation = tensor_to_nested(obs)
    return {
        "observation": observation,
        "shape": list(obs.shape),
        "reward": result.reward,
        "terminal": result.terminal,
        "info": result.info,
    }


def error_payload(code: str, message: str, **data) -> dict:
    err = {"code": code, "message": message}
    err.update(data)
    return {"error": err}


class LearnerConnection:
    """Dispatches protocol requests for one connection-scoped session."""

    def __init__(self, store: ReplayStore | None = None):
        self.session = EpisodeSession(store)
        self.encoding = "json"
        self.closed = False

    def handle_line(self, line: str) -> dict:
        line = line.strip()
        if not line:
            return error_payload("bad_json", "empty request line")
        try:
            request = json.loads(line)
        except json.JSONDecodeError as exc:
            return error_payload("bad_json", f"malformed JSON: {exc}")
        if not isinstance(request, dict) or "type" not in request:
            return error_payload("bad_request", "request must be an object with a 'type'")
        kind = request["type"]
        try:
            if kind == "reset":
                return self._reset(request)
            if kind == "step":
                return self._step(request)
            if kind == "record_replay":
                replay_id, doc = self.session.record_replay()
                return {"replay_id": replay_id, "content_hash": doc.content_hash()}
            if kind == "close":
                self.closed = True
                return {"ok": True}
            return error_payload("bad_request", f"unknown request type {kind!r}")
        except SessionError as exc:
            return error_payload(exc.code, str(exc), **exc.data)
        except IllegalActionError as exc:
            mask = [k in exc.legal for k in range(NUM_ACTIONS)]
            return error_payload("illegal_action", str(exc), legal_mask=mask)
        except Exception as exc:  # noqa: BLE001 - protocol servers must not crash
            return error_payload("internal", f"{type(exc).__name__}: {exc}")

    def _reset(self, request: dict) -> dict:
        params = {k: v for k, v in request.items() if k != "type"}
        unknown = set(params) - _RESET_KEYS
        if unknown:
            raise SessionError("bad_params", f"unknown reset parameters {sorted(unknown)}")
        encoding = params.pop("obs_encoding", "json")
        if encoding not in ("json", "f32b64"):
            raise SessionError("bad_params", f"unknown obs_encoding {encoding!r}")
        if "spec" in params:
            from ..scenario import ScenarioSpec

            try:
                params["spec"] = ScenarioSpec.from_json(params["spec"])
            except (KeyError, TypeError, IndexError) as exc:
                raise SessionError("bad_params", f"malformed scenario spec: {exc}")
        result = self.session.reset(**params)
        self.encoding = encoding
        return step_payload(result, self.encoding)

    def _step(self, request: dict) -> dict:
        if "action" not in request:
            raise SessionError("bad_request", "step requires an 'action'")
        return step_payload(self.session.step(request["action"]), self.encoding)


def serve_stream(rfile, wfile, store: ReplayStore | None = None):
    """Run the protocol over any pair of text-mode read/write streams."""
    conn = LearnerConnection(store)
    for line in rfile:
        reply = conn.handle_line(line)
        wfile.write(canonical_dumps(reply) + "\n")
        wfile.flush()
        if conn.closed:
            break


class _Handler(socketserver.StreamRequestHandler):
    def handle(self):
        rfile = self.rfile
        conn = LearnerConnection(self.server.replay_store)
        for raw in rfile:
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError:
                reply = error_payload("bad_json", "request line is not valid UTF-8")
            else:
                reply = conn.handle_line(line)
            try:
                self.wfile.write((canonical_dumps(reply) + "\n").encode("utf-8"))
            except (BrokenPipeError, ConnectionResetError):
                return
            if conn.closed:
                return


class _TCPServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True


class LearnerServer:
    """Threaded TCP host for the learner protocol."""

    def __init__(self, host: str = "127.0.0.1", port: int = 0, replay_dir: str | None = None):
        self._server = _TCPServer((host, port), _Handler)
        self._server.replay_store = ReplayStore(replay_dir) if replay_dir else None
        self._thread: threading.Thread | None = None

    @property
    def address(self) -> tuple[str, int]:
        return self._server.server_address

    def start(self) -> tuple[str, int]:
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()
        return self.address

    def stop(self):
        self._server.shutdown()
        self._server.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)


class LearnerClient:
    """Minimal scripted client; keeps raw reply bytes for transcript checks."""

    def __init__(self, host: str, port: int, timeout: float = 30.0):
        self._sock = socket.create_connection((host, port), timeout=timeout)
        self._reader = self._sock.makefile("rb")
        self.transcript: list[bytes] = []

    def request(self, obj: dict) -> dict:
        self._sock.sendall((json.dumps(obj) + "\n").encode("utf-8"))
        line = self._reader.readline()
        if not line:
            raise ConnectionError("server closed the connection")
        self.transcript.append(line)
        return json.loads(line)

    def send_raw(self, data: bytes) -> dict:
        self._sock.sendall(data)
        line = self._reader.readline()
        self.transcript.append(line)
        return json.loads(line)

    def reset(self, **params) -> dict:
        return self.request({"type": "reset", **params})

    def step(self, action: int) -> dict:
        return self.request({"type": "step", "action": action})

    def close(self):
        try:
            self.request({"type": "close"})
        except (ConnectionError, OSError):
            pass
        self._sock.close()


__all__ = [
    "step_payload",
    "error_payload",
    "LearnerConnection",
    "serve_stream",
    "LearnerServer",
    "LearnerClient",
]
