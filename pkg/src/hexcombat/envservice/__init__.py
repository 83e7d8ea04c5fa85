"""Network-facing environment host: learner protocol, UI endpoints, replays."""

from .replay import (
    ReplayDocument,
    ReplayRecorder,
    ReplayStore,
    ReplayVerificationError,
    canonical_dumps,
    resimulate,
    verify,
)
from .session import (
    DEFAULT_REWARDS,
    EpisodeSession,
    RewardConfig,
    SessionError,
    StepResult,
    engineered_reward,
)
from .learner import LearnerClient, LearnerServer, serve_stream
from .ui import create_app
from .server import ServeConfig, ServiceHandle, serve, serve_forever

__all__ = [
    "ReplayDocument",
    "ReplayRecorder",
    "ReplayStore",
    "ReplayVerificationError",
    "canonical_dumps",
    "resimulate",
    "verify",
    "DEFAULT_REWARDS",
    "EpisodeSession",
    "RewardConfig",
    "SessionError",
    "StepResult",
    "engineered_reward",
    "LearnerClient",
    "LearnerServer",
    "serve_stream",
    "create_app",
    "ServeConfig",
    "ServiceHandle",
    "serve",
    "serve_forever",
]
