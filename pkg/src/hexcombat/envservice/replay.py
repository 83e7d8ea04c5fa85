"""Replay documents: record, persist, re-simulate, and verify finished games.

A ReplayDocument is a scenario plus the ordered action log and the
per-phase score trace. Because the engine is deterministic, re-simulating
from the scenario must reproduce the recorded trace exactly; `verify`
enforces that. Documents are stored one file per game, named by content hash.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from ..scenario import ScenarioSpec, instantiate
from ..simcore import (
    GameState,
    ScoreBreakdown,
    apply_action,
    current_unit_id,
    end_phase,
    is_terminal,
    state_to_message,
    total_score,
)

REPLAY_VERSION = 1


class ReplayVerificationError(RuntimeError):
    """Re-simulating the document did not reproduce its recorded trace."""


def canonical_dumps(obj) -> str:
    """Canonical JSON: sorted keys, no whitespace. Used wherever bytes must match."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


@dataclass
class ReplayDocument:
    version: int
    spec: ScenarioSpec
    actions: list[dict]        # {"phase": int, "unit": int, "action": int}
    score_trace: list[dict]    # one ScoreBreakdown dict per completed phase
    final_score: int

    def to_json(self) -> dict:
        return {
            "version": self.version,
            "scenario": self.spec.to_json(),
            "actions": self.actions,
            "score_trace": self.score_trace,
            "final_score": self.final_score,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ReplayDocument":
        return cls(
            version=data["version"],
            spec=ScenarioSpec.from_json(data["scenario"]),
            actions=list(data["actions"]),
            score_trace=list(data["score_trace"]),
            final_score=data["final_score"],
        )

    def canonical_bytes(self) -> bytes:
        return canonical_dumps(self.to_json()).encode("utf-8")

    def content_hash(self) -> str:
        return hashlib.sha256(self.canonical_bytes()).hexdigest()


def _score_entry(score: ScoreBreakdown) -> dict:
    return {
        "blue_city": score.blue_city,
        "blue_combat": score.blue_combat,
        "red_city": score.red_city,
        "red_combat": score.red_combat,
    }


@dataclass
class ReplayRecorder:
    """Collects the action log and score trace while a game is played."""

    spec: ScenarioSpec
    actions: list[dict] = field(default_factory=list)
    score_trace: list[dict] = field(default_factory=list)

    def record_action(self, phase: int, unit_id: int, action: int):
        self.actions.append({"phase": phase, "unit": unit_id, "action": action})

    def record_phase_end(self, score: ScoreBreakdown):
        self.score_trace.append(_score_entry(score))

    def build(self, final_state: GameState) -> ReplayDocument:
        return ReplayDocument(
            version=REPLAY_VERSION,
            spec=self.spec,
            actions=list(self.actions),
            score_trace=list(self.score_trace),
            final_score=total_score(final_state),
        )


def resimulate(
    doc: ReplayDocument, collect_states: bool = False
) -> tuple[GameState, list[dict], list[dict]]:
    """Replay the action log from the scenario.

    Returns (final state, per-phase score trace, state messages). State
    messages are collected only when requested: the initial state plus one
    snapshot after every action and every phase end.
    """
    s = instantiate(doc.spec)
    states: list[dict] = [state_to_message(s)] if collect_states else []
    trace: list[dict] = []

    def advance_phase():
        nonlocal s
        s, _ = end_phase(s)
        trace.append(_score_entry(s.score))
        if collect_states:
            states.append(state_to_message(s))

    for entry in doc.actions:
        while s.phase < entry["phase"]:
            advance_phase()
        s, _ = apply_action(s, entry["unit"], entry["action"])
        if collect_states:
            states.append(state_to_message(s))

    terminal, _ = is_terminal(s)
    while not terminal:
        if current_unit_id(s) is not None:
            raise ReplayVerificationError("action log ended with units still to move")
        advance_phase()
        terminal, _ = is_terminal(s)
    return s, trace, states


def verify(doc: ReplayDocument) -> GameState:
    """Re-simulate and assert the recorded score trace and final score."""
    try:
        final, trace, _ = resimulate(doc)
    except ReplayVerificationError:
        raise
    except Exception as exc:
        raise ReplayVerificationError(f"replay does not re-simulate: {exc}") from exc
    if trace != doc.score_trace:
        raise ReplayVerificationError("per-phase score trace mismatch")
    if total_score(final) != doc.final_score:
        raise ReplayVerificationError(
            f"final score mismatch: recorded {doc.final_score}, got {total_score(final)}"
        )
    return final


class ReplayStore:
    """Append-only directory of replay documents, content-addressed by hash."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def save(self, doc: ReplayDocument) -> str:
        replay_id = doc.content_hash()
        path = self.root / f"{replay_id}.json"
        if not path.exists():
            tmp = self.root / f".{replay_id}.{os.getpid()}.tmp"
            tmp.write_bytes(doc.canonical_bytes())
            tmp.replace(path)
        return replay_id

    def load(self, replay_id: str) -> ReplayDocument:
        path = self.root / f"{replay_id}.json"
        if not path.exists():
            raise KeyError(f"no replay {replay_id}")
        return ReplayDocument.from_json(json.loads(path.read_text()))

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.root.glob("*.json"))

    def summaries(self) -> list[dict]:
        out = []
        for replay_id in self.list_ids():
            doc = self.load(replay_id)
            out.append(
                {
                    "id": replay_id,
                    "size": doc.spec.size,
                    "final_score": doc.final_score,
                    "actions": len(doc.actions),
                    "phases": len(doc.score_trace),
                }
            )
        return out


__all__ = [
    "REPLAY_VERSION",
    "ReplayVerificationError",
    "canonical_dumps",
    "ReplayDocument",
    "ReplayRecorder",
    "resimulate",
    "verify",
    "ReplayStore",
]
