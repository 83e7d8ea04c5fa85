"""Scripted decision-makers and the external-policy adapter.

The rule-based baseline attacks any adjacent enemy (uniformly among them) and
otherwise moves by a hexagon-scoring heuristic: approach the nearest city not
already owned, and approach enemies when its faction is the stronger one or
keep distance when weaker. If staying put scores at least as well as any
move, it passes.

Agents are stateless apart from an injected random.Random; use one RNG per
game and never share it across games.
"""

from __future__ import annotations

import json
import random
import socket
from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from .hexgrid import Hex, hex_distance, neighbor, neighbors
from .simcore import (
    PASS_ACTION,
    Faction,
    GameState,
    Terrain,
    legal_actions,
)
from . import observation as obs_mod


class Posture(Enum):
    ATTACK = "attack"
    DEFEND = "defend"


@dataclass(frozen=True)
class HexScoreWeights:
    city_weight: float = 1.0
    enemy_weight: float = 0.5

    def __post_init__(self):
        if self.city_weight < 0 or self.enemy_weight < 0:
            raise ValueError("weights must be nonnegative")


DEFAULT_WEIGHTS = HexScoreWeights()


def assess_posture(s: GameState, faction: Faction) -> Posture:
    """Attack when own total strength is at least the enemy's, else defend."""
    own = s.faction_strength(faction)
    enemy = s.faction_strength(faction.enemy)
    return Posture.ATTACK if own >= enemy else Posture.DEFEND


@lru_cache(maxsize=64)
def _water_cells(terrain: tuple) -> frozenset[Hex]:
    return frozenset(
        (r, c)
        for r, row in enumerate(terrain)
        for c, t in enumerate(row)
        if t is Terrain.WATER
    )


@lru_cache(maxsize=4096)
def _bfs_field(
    rows: int, cols: int, water: frozenset[Hex], sources: tuple[Hex, ...]
) -> dict:
    """Multi-source BFS distances over non-water hexes."""
    dist = {h: 0 for h in sources}
    queue = deque(sources)
    while queue:
        h = queue.popleft()
        d = dist[h] + 1
        for _, nb in neighbors(h, rows, cols):
            if nb not in dist and nb not in water:
                dist[nb] = d
                queue.append(nb)
    return dist


def path_distance(s: GameState, h: Hex, targets: tuple[Hex, ...]) -> float:
    """Shortest-path hex distance from h to the nearest target.

    Terrain-blind except that water is impassable; returns inf when empty or
    unreachable. Boards without water use the closed-form hex distance.
    """
    if not targets:
        return float("inf")
    water = _water_cells(s.terrain)
    if not water:
        return float(min(hex_distance(h, t) for t in targets))
    field = _bfs_field(s.rows, s.cols, water, tuple(sorted(targets)))
    d = field.get(h)
    return float(d) if d is not None else float("inf")


def _relevant_cities(s: GameState, faction: Faction) -> tuple[Hex, ...]:
    unowned = tuple(sorted(h for h, o in s.city_owner.items() if o is not faction))
    if unowned:
        return unowned
    return tuple(sorted(s.city_owner.keys()))


def passagg_support(
    s: GameState, unit_id: int, weights: HexScoreWeights = DEFAULT_WEIGHTS
) -> tuple[int, ...]:
    """The uniform-choice support of the rule-based policy for this unit.

    Adjacent enemies yield the set of attack actions. Otherwise the argmax
    set of the hexagon score over reachable moves; (pass,) when staying put
    is among the best.
    """
    legal = legal_actions(s, unit_id)
    unit = s.units[unit_id]

    attacks = []
    moves = []
    for k in legal:
        if k == PASS_ACTION:
            continue
        dest = neighbor(unit.position, k)
        occupant = s.occupied.get(dest)
        if occupant is not None:
            attacks.append(k)
        else:
            moves.append((k, dest))
    if attacks:
        return tuple(attacks)

    sign = 1.0 if assess_posture(s, unit.faction) is Posture.ATTACK else -1.0
    cities = _relevant_cities(s, unit.faction)
    enemies = tuple(sorted(u.position for u in s.units.values() if u.faction is not unit.faction))

    def hex_score(h: Hex) -> float:
        score = 0.0
        if cities:
            score -= weights.city_weight * path_distance(s, h, cities)
        if enemies:
            score -= sign * weights.enemy_weight * path_distance(s, h, enemies)
        return score

    stay = hex_score(unit.position)
    scored = [(k, hex_score(dest)) for k, dest in moves]
    best = max((sc for _, sc in scored), default=stay)
    if stay >= best:
        return (PASS_ACTION,)
    return tuple(k for k, sc in scored if sc == best)


def passagg_decide(
    s: GameState,
    unit_id: int,
    rng: random.Random,
    weights: HexScoreWeights = DEFAULT_WEIGHTS,
) -> int:
    support = passagg_support(s, unit_id, weights)
    if len(support) == 1:
        return support[0]
    return rng.choice(support)


def random_decide(s: GameState, unit_id: int, rng: random.Random) -> int:
    """Uniform choice over the legal actions."""
    return rng.choice(legal_actions(s, unit_id))


class Agent:
    """Decision-maker interface used by the harness and the env service."""

    name = "agent"

    def decide(self, s: GameState, unit_id: int) -> int:
        raise NotImplementedError


def _as_rng(rng: random.Random | int | None) -> random.Random:
    if isinstance(rng, random.Random):
        return rng
    return random.Random(rng)


class RandomAgent(Agent):
    name = "random"

    def __init__(self, rng: random.Random | int | None = None):
        self.rng = _as_rng(rng)

    def decide(self, s: GameState, unit_id: int) -> int:
        return random_decide(s, unit_id, self.rng)


class PassAggAgent(Agent):
    name = "passagg"

    def __init__(
        self,
        rng: random.Random | int | None = None,
        weights: HexScoreWeights = DEFAULT_WEIGHTS,
    ):
        self.rng = _as_rng(rng)
        self.weights = weights

    def decide(self, s: GameState, unit_id: int) -> int:
        return passagg_decide(s, unit_id, self.rng, self.weights)


class ProtocolError(RuntimeError):
    """Remote policy broke the wire contract (illegal action, timeout, bad reply)."""

    def __init__(self, message: str, legal_mask: list[bool] | None = None):
        super().__init__(message)
        self.legal_mask = legal_mask


class PolicyClient:
    """JSON-lines client asking a remote policy server for actions.

    One request per decision: {"type": "act", "observation": ..., "shape": ...,
    "legal_mask": [...7 bools...]} -> {"action": k}.
    """

    def __init__(self, host: str, port: int, timeout: float = 10.0):
        self.host = host
        self.port = port
        self.timeout = timeout
        self._sock: socket.socket | None = None
        self._reader = None

    def _connect(self):
        if self._sock is None:
            self._sock = socket.create_connection((self.host, self.port), timeout=self.timeout)
            self._reader = self._sock.makefile("r", encoding="utf-8")

    def act(self, observation: np.ndarray, legal_mask: list[bool]) -> int:
        self._connect()
        request = {
            "type": "act",
            "shape": list(observation.shape),
            "observation": observation.tolist(),
            "legal_mask": list(legal_mask),
        }
        try:
            self._sock.sendall((json.dumps(request) + "\n").encode("utf-8"))
            line = self._reader.readline()
        except (socket.timeout, TimeoutError) as exc:
            raise ProtocolError(f"policy server timed out after {self.timeout}s") from exc
        if not line:
            raise ProtocolError("policy server closed the connection")
        try:
            reply = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ProtocolError(f"malformed policy reply: {line!r}") from exc
        if "action" not in reply:
            raise ProtocolError(f"policy reply missing action: {reply!r}")
        return reply["action"]

    def close(self):
        if self._sock is not None:
            try:
                self._sock.close()
            finally:
                self._sock = None
                self._reader = None


def external_decide(
    observation: np.ndarray, legal_mask: list[bool], session: PolicyClient
) -> int:
    """Forward an observation to a remote policy and validate its action."""
    action = session.act(observation, legal_mask)
    if (
        not isinstance(action, int)
        or not (0 <= action < len(legal_mask))
        or not legal_mask[action]
    ):
        raise ProtocolError(
            f"remote returned illegal action {action!r}", legal_mask=list(legal_mask)
        )
    return action


class ExternalPolicyAgent(Agent):
    """Adapter that drives a unit from a remote policy over the wire protocol."""

    name = "external"

    def __init__(self, client: PolicyClient, obs_mode: str = "local"):
        if obs_mode not in ("local", "global"):
            raise ValueError("obs_mode must be 'local' or 'global'")
        self.client = client
        self.obs_mode = obs_mode

    def decide(self, s: GameState, unit_id: int) -> int:
        g = obs_mod.build_global(s, unit_id)
        if self.obs_mode == "local":
            tensor = obs_mod.localize(g, s.units[unit_id].position)
        else:
            tensor = g
        legal = legal_actions(s, unit_id)
        mask = [k in legal for k in range(7)]
        return external_decide(tensor, mask, self.client)


__all__ = [
    "Posture",
    "HexScoreWeights",
    "DEFAULT_WEIGHTS",
    "assess_posture",
    "path_distance",
    "passagg_support",
    "passagg_decide",
    "random_decide",
    "Agent",
    "RandomAgent",
    "PassAggAgent",
    "ProtocolError",
    "PolicyClient",
    "external_decide",
    "ExternalPolicyAgent",
]
