"""Episode sessions: reset/step semantics shared by the learner protocol and UI.

A session drives one faction (the role) unit by unit. The learner is queried
once per friendly unit per phase; when the friendly phase completes, the
scripted opponent plays its entire phase internally before control returns.

The engineered reward per step is

    max(R_raw, 0) * (S_c / S_o) + B_t * I_t

where R_raw is the game-score delta since the previous step (from the role's
perspective), S_c / S_o the surviving fraction of the role's initial total
strength, and B_t a terminal bonus (default 25) paid exactly once, on the
terminal step.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..agents import Agent, PassAggAgent, RandomAgent
from ..observation import build_global, localize
from ..scenario import ScenarioSpec, generate, instantiate
from ..simcore import (
    NUM_ACTIONS,
    PASS_ACTION,
    Faction,
    GameState,
    apply_action,
    current_unit_id,
    end_phase,
    is_terminal,
    legal_actions,
    state_to_message,
    total_score,
)
from .replay import ReplayDocument, ReplayRecorder, ReplayStore, verify


@dataclass(frozen=True)
class RewardConfig:
    terminal_bonus: float = 25.0

    def __post_init__(self):
        if self.terminal_bonus < 0:
            raise ValueError("terminal bonus must be nonnegative")


DEFAULT_REWARDS = RewardConfig()


def engineered_reward(
    raw_delta: int, current_strength: int, initial_strength: int,
    terminal: bool, config: RewardConfig = DEFAULT_REWARDS,
) -> float:
    """Clamped score delta scaled by surviving strength, plus the terminal bonus."""
    reward = max(raw_delta, 0) * (current_strength / initial_strength)
    if terminal:
        reward += config.terminal_bonus
    return reward


@dataclass
class StepResult:
    observation: np.ndarray
    reward: float
    terminal: bool
    info: dict[str, Any] = field(default_factory=dict)


class SessionError(RuntimeError):
    """Protocol-level session misuse (no episode, episode over, bad params)."""

    def __init__(self, code: str, message: str, **data):
        super().__init__(message)
        self.code = code
        self.data = data


_OPPONENTS = {"passagg": PassAggAgent, "random": RandomAgent}


class EpisodeSession:
    """One learner-facing episode at a time; also drives human UI play."""

    def __init__(self, replay_store: ReplayStore | None = None):
        self.store = replay_store
        self.state: GameState | None = None
        self.spec: ScenarioSpec | None = None
        self.role = Faction.BLUE
        self.obs_mode = "local"
        self.illegal_mode = "error"
        self.rewards = DEFAULT_REWARDS
        self.opponent: Agent | None = None
        self.recorder: ReplayRecorder | None = None
        self.terminal = True
        self.terminal_reason: str | None = None
        self._initial_strength = 0
        self._prev_total = 0
        self._last_agent_pos = (0, 0)

    # -- episode lifecycle -------------------------------------------------

    def reset(
        self,
        size: int | None = None,
        spec: ScenarioSpec | None = None,
        seed: int | None = None,
        role: str | Faction = Faction.BLUE,
        obs_mode: str = "local",
        opponent: str | Agent = "passagg",
        illegal_mode: str = "error",
        rewards: RewardConfig = DEFAULT_REWARDS,
    ) -> StepResult:
        """Start a new episode; returns the first observation with reward 0."""
        if (size is None) == (spec is None):
            raise SessionError("bad_params", "provide exactly one of size or spec")
        if obs_mode not in ("local", "global"):
            raise SessionError("bad_params", f"unknown obs_mode {obs_mode!r}")
        if illegal_mode not in ("error", "pass"):
            raise SessionError("bad_params", f"unknown illegal_mode {illegal_mode!r}")
        role = Faction(role)
        if spec is None:
            if seed is None:
                seed = random.SystemRandom().getrandbits(63)
            try:
                spec = generate(size, seed)
            except ValueError as exc:
                raise SessionError("bad_params", str(exc)) from exc

        if isinstance(opponent, Agent):
            opp = opponent
        elif opponent in _OPPONENTS:
            opp = _OPPONENTS[opponent](random.Random(f"{spec.seed}:opponent"))
        else:
            raise SessionError("bad_params", f"unknown opponent {opponent!r}")

        self.spec = spec
        self.state = instantiate(spec)
        self.role = role
        self.obs_mode = obs_mode
        self.illegal_mode = illegal_mode
        self.rewards = rewards
        self.opponent = opp
        self.recorder = ReplayRecorder(spec)
        self.terminal = False
        self.terminal_reason = None
        self._initial_strength = self.state.faction_strength(role)
        self._prev_total = 0

        # A red-role session watches the opponent's opening phase play out.
        if self.state.on_move is not role:
            self._play_opponent_phase()
        self._check_terminal()

        uid = current_unit_id(self.state)
        if uid is not None:
            self._last_agent_pos = self.state.units[uid].position
        delta = total_score(self.state) - self._prev_total
        self._prev_total = total_score(self.state)
        return StepResult(
            observation=self._observe(),
            reward=0.0,
            terminal=self.terminal,
            info=self._info(delta),
        )

    def step(self, action: int) -> StepResult:
        """Apply the learner's action for the current on-move friendly unit."""
        if self.state is None:
            raise SessionError("no_episode", "reset before stepping")
        if self.terminal:
            raise SessionError("episode_over", "episode is terminal; reset to continue")
        if not isinstance(action, int) or not (0 <= action < NUM_ACTIONS):
            raise SessionError("bad_action", f"action must be an integer in [0, 6], got {action!r}")

        uid = current_unit_id(self.state)
        legal = legal_actions(self.state, uid)
        illegal = action not in legal
        if illegal:
            if self.illegal_mode == "error":
                raise SessionError(
                    "illegal_action",
                    f"action {action} illegal for unit {uid}",
                    legal_mask=[k in legal for k in range(NUM_ACTIONS)],
                )
            action = PASS_ACTION

        self._last_agent_pos = self.state.units[uid].position
        self._apply_recorded(uid, action)
        if uid in self.state.units:
            self._last_agent_pos = self.state.units[uid].position
        self._check_terminal()

        # Friendly phase done: advance it and let the opponent play its phase.
        if not self.terminal and current_unit_id(self.state) is None:
            self._advance_phase()
            if not self.terminal:
                self._play_opponent_phase()

        now = total_score(self.state)
        delta = now - self._prev_total
        self._prev_total = now
        raw = delta if self.role is Faction.BLUE else -delta
        strength = self.state.faction_strength(self.role)
        reward = engineered_reward(
            raw, strength, self._initial_strength, self.terminal, self.rewards
        )
        uid = current_unit_id(self.state)
        if uid is not None:
            self._last_agent_pos = self.state.units[uid].position
        info = self._info(delta)
        if illegal:
            info["illegal"] = True
        return StepResult(
            observation=self._observe(),
            reward=reward,
            terminal=self.terminal,
            info=info,
        )

    def record_replay(self) -> tuple[str | None, ReplayDocument]:
        """Build, verify, and persist (when a store is configured) the replay."""
        if self.state is None:
            raise SessionError("no_episode", "nothing to record")
        if not self.terminal:
            raise SessionError("episode_running", "episode is not terminal yet")
        doc = self.recorder.build(self.state)
        verify(doc)  # re-simulate; the recorded trace must reproduce exactly
        replay_id = self.store.save(doc) if self.store is not None else None
        return replay_id, doc

    # -- views --------------------------------------------------------------

    def state_message(self) -> dict:
        if self.state is None:
            raise SessionError("no_episode", "reset first")
        msg = state_to_message(self.state)
        msg["role"] = self.role.value
        msg["obs_mode"] = self.obs_mode
        return msg

    # -- internals ----------------------------------------------------------

    def _observe(self) -> np.ndarray:
        g = build_global(self.state)
        if self.obs_mode == "global":
            return g
        uid = current_unit_id(self.state)
        center = self.state.units[uid].position if uid is not None else self._last_agent_pos
        return localize(g, center)

    def _info(self, delta: int) -> dict:
        uid = current_unit_id(self.state)
        if uid is not None:
            legal = legal_actions(self.state, uid)
            mask = [k in legal for k in range(NUM_ACTIONS)]
        else:
            mask = [False] * 6 + [True]
        info = {
            "raw_score_delta": delta,
            "total_score": total_score(self.state),
            "legal_mask": mask,
            "phase": self.state.phase,
        }
        if self.terminal:
            info["terminal_reason"] = self.terminal_reason
        return info

    def _apply_recorded(self, uid: int, action: int):
        phase = self.state.phase
        self.state, _ = apply_action(self.state, uid, action)
        self.recorder.record_action(phase, uid, action)

    def _advance_phase(self):
        self.state, _ = end_phase(self.state)
        self.recorder.record_phase_end(self.state.score)
        self._check_terminal()

    def _play_opponent_phase(self):
        """Opponent acts every unit, then the phase ends; stops early on terminal."""
        while not self.terminal:
            uid = current_unit_id(self.state)
            if uid is None:
                self._advance_phase()
                return
            action = self.opponent.decide(self.state, uid)
            self._apply_recorded(uid, action)
            self._check_terminal()

    def _check_terminal(self):
        terminal, reason = is_terminal(self.state)
        if terminal:
            self.terminal = True
            self.terminal_reason = reason


__all__ = [
    "RewardConfig",
    "DEFAULT_REWARDS",
    "engineered_reward",
    "StepResult",
    "SessionError",
    "EpisodeSession",
]
