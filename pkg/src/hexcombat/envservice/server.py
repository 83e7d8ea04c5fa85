"""Service orchestration: the learner TCP host and the HTTP UI side by side."""

from __future__ import annotations

import threading
from dataclasses import dataclass

import uvicorn

from .learner import LearnerServer
from .ui import create_app


@dataclass
class ServeConfig:
    host: str = "127.0.0.1"
    http_port: int = 8000
    learner_port: int = 8001
    replay_dir: str | None = None
    frontend_dir: str | None = None


class ServiceHandle:
    """Running service pair; stop() shuts both down."""

    def __init__(self, config: ServeConfig):
        self.config = config
        self.learner = LearnerServer(config.host, config.learner_port, config.replay_dir)
        self.app = create_app(config.replay_dir, config.frontend_dir)
        self._uvicorn: uvicorn.Server | None = None
        self._thread: threading.Thread | None = None

    def start(self) -> "ServiceHandle":
        self.learner.start()
        uv_config = uvicorn.Config(
            self.app, host=self.config.host, port=self.config.http_port, log_level="warning"
        )
        self._uvicorn = uvicorn.Server(uv_config)
        self._thread = threading.Thread(target=self._uvicorn.run, daemon=True)
        self._thread.start()
        return self

    def wait_ready(self, timeout: float = 10.0):
        import time

        deadline = time.monotonic() + timeout
        while time.monotonic() < deadline:
            if self._uvicorn is not None and self._uvicorn.started:
                return
            time.sleep(0.02)
        raise TimeoutError("HTTP server did not start in time")

    @property
    def learner_address(self) -> tuple[str, int]:
        return self.learner.address

    def stop(self):
        self.learner.stop()
        if self._uvicorn is not None:
            self._uvicorn.should_exit = True
        if self._thread is not None:
            self._thread.join(timeout=5)


def serve(config: ServeConfig) -> ServiceHandle:
    """Start both servers in background threads and return their handle."""
    return ServiceHandle(config).start()


def serve_forever(config: ServeConfig):
    """Blocking variant used by the CLI."""
    handle = ServiceHandle(config)
    handle.learner.start()
    host, port = handle.learner.address
    print(f"learner protocol: tcp://{host}:{port}")
    print(f"ui endpoints:     http://{config.host}:{config.http_port}")
    if config.replay_dir:
        print(f"replay store:     {config.replay_dir}")
    try:
        uvicorn.run(handle.app, host=config.host, port=config.http_port, log_level="info")
    finally:
        handle.learner.stop()


__all__ = ["ServeConfig", "ServiceHandle", "serve", "serve_forever"]
