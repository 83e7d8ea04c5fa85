"""Turn/phase game engine: units, movement, combat, city control, scoring.

The engine is functional: every operation takes a GameState and returns a new
one (plus JSON-ready event dicts), never mutating its input. A phase is one
full turn for one faction; within a phase that faction's units act once each,
in ascending unit-id order. City control points (24 per owned city) accrue at
every phase end.

Combat is deterministic mutual damage: the defender loses
round(attacker_fraction * attacker strength) and the attacker loses
round(counter_fraction * defender pre-combat strength), rounding half away
from zero. A unit whose strength drops below the removal threshold (default
50) leaves the game and its residual strength is awarded to the opposing
faction's combat score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

from .hexgrid import Hex, in_bounds, neighbor

CITY_POINTS_PER_PHASE = 24
PASS_ACTION = 6
NUM_ACTIONS = 7


class Faction(str, Enum):
    BLUE = "blue"
    RED = "red"

    @property
    def enemy(self) -> "Faction":
        return Faction.RED if self is Faction.BLUE else Faction.BLUE


class UnitType(str, Enum):
    INFANTRY = "infantry"
    MECHANIZED = "mechanized"
    ARTILLERY = "artillery"
    OTHER = "other"


class Terrain(str, Enum):
    CLEAR = "clear"
    ROUGH = "rough"
    URBAN = "urban"
    WATER = "water"
    MARSH = "marsh"


class IllegalActionError(ValueError):
    """An action outside the legal set for the acting unit."""

    def __init__(self, message: str, legal: tuple[int, ...] = ()):
        super().__init__(message)
        self.legal = legal


@dataclass(frozen=True)
class Unit:
    id: int
    faction: Faction
    type: UnitType
    strength: int
    position: Hex
    can_move: bool


@dataclass(frozen=True)
class ScoreBreakdown:
    """Cumulative score components, all nonnegative, blue perspective for total."""

    blue_city: int = 0
    blue_combat: int = 0
    red_city: int = 0
    red_combat: int = 0

    @property
    def total(self) -> int:
        return self.blue_city + self.blue_combat - (self.red_city + self.red_combat)

    def as_dict(self) -> dict:
        return {
            "blue_city": self.blue_city,
            "blue_combat": self.blue_combat,
            "red_city": self.red_city,
            "red_combat": self.red_combat,
            "total": self.total,
        }


@dataclass(frozen=True)
class CombatConfig:
    attacker_fraction: float = 0.4
    counter_fraction: float = 0.2
    removal_threshold: int = 50

    def __post_init__(self):
        if not (0 < self.attacker_fraction <= 1 and 0 < self.counter_fraction <= 1):
            raise ValueError("combat fractions must be in (0, 1]")
        if not (0 < self.removal_threshold <= 100):
            raise ValueError("removal threshold must be in (0, 100]")


@dataclass
class GameState:
    """Full board situation. Treated as an immutable value by the engine."""

    rows: int
    cols: int
    terrain: tuple[tuple[Terrain, ...], ...]
    units: dict[int, Unit]
    city_owner: dict[Hex, Faction | None]
    phase: int
    phase_budget: int
    on_move: Faction
    score: ScoreBreakdown
    seed: int
    combat: CombatConfig = field(default_factory=CombatConfig)
    occupied: dict[Hex, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.occupied:
            self.occupied = {u.position: u.id for u in self.units.values()}

    def terrain_at(self, h: Hex) -> Terrain:
        return self.terrain[h[0]][h[1]]

    def faction_units(self, faction: Faction) -> list[Unit]:
        return [u for u in self.units.values() if u.faction is faction]

    def faction_strength(self, faction: Faction) -> int:
        return sum(u.strength for u in self.units.values() if u.faction is faction)


def round_half_away(x: float) -> int:
    """Round half away from zero (only nonnegative values occur in the engine)."""
    if x >= 0:
        return math.floor(x + 0.5)
    return -math.floor(-x + 0.5)


def current_unit_id(s: GameState) -> int | None:
    """Lowest-id unit of the on-move faction that can still act, or None."""
    best = None
    for u in s.units.values():
        if u.faction is s.on_move and u.can_move and (best is None or u.id < best):
            best = u.id
    return best


def legal_actions(s: GameState, unit_id: int) -> list[int]:
    """Sorted legal action indices for the unit: 0-5 directions, 6 is pass.

    A directional action is legal when the adjacent hex is in bounds, not
    water, and either empty or held by an enemy unit. Pass is always legal.
    """
    unit = s.units.get(unit_id)
    if unit is None:
        raise ValueError(f"unknown unit {unit_id}")
    if unit.faction is not s.on_move or not unit.can_move:
        raise ValueError(f"unit {unit_id} is not on move")
    actions = []
    for k in range(6):
        dest = neighbor(unit.position, k)
        if not in_bounds(dest, s.rows, s.cols):
            continue
        if s.terrain[dest[0]][dest[1]] is Terrain.WATER:
            continue
        occupant = s.occupied.get(dest)
        if occupant is not None and s.units[occupant].faction is unit.faction:
            continue
        actions.append(k)
    actions.append(PASS_ACTION)
    return actions


def apply_action(s: GameState, unit_id: int, action: int) -> tuple[GameState, list[dict]]:
    """Apply one action for one unit; returns the new state and event log entries."""
    legal = legal_actions(s, unit_id)  # also validates unit / on-move status
    if action not in legal:
        raise IllegalActionError(
            f"action {action} illegal for unit {unit_id}", legal=tuple(legal)
        )

    unit = s.units[unit_id]
    units = dict(s.units)
    occupied = dict(s.occupied)
    city_owner = s.city_owner
    score = s.score
    events: list[dict] = []

    if action == PASS_ACTION:
        units[unit_id] = replace(unit, can_move=False)
        events.append({"type": "pass", "unit": unit_id, "faction": unit.faction.value})
        return _rebuild(s, units, occupied, city_owner, score), events

    dest = neighbor(unit.position, action)
    target_id = s.occupied.get(dest)

    if target_id is None:
        # Move; entering an urban hex takes control of it.
        captured = False
        if s.terrain[dest[0]][dest[1]] is Terrain.URBAN and city_owner.get(dest) is not unit.faction:
            city_owner = dict(city_owner)
            city_owner[dest] = unit.faction
            captured = True
        del occupied[unit.position]
        occupied[dest] = unit_id
        units[unit_id] = replace(unit, position=dest, can_move=False)
        events.append(
            {
                "type": "move",
                "unit": unit_id,
                "faction": unit.faction.value,
                "from": list(unit.position),
                "to": list(dest),
                "city_captured": captured,
            }
        )
        return _rebuild(s, units, occupied, city_owner, score), events

    # Combat: attacker stays in place, both sides take deterministic damage.
    cfg = s.combat
    defender = s.units[target_id]
    dmg_to_defender = round_half_away(cfg.attacker_fraction * unit.strength)
    dmg_to_attacker = round_half_away(cfg.counter_fraction * defender.strength)
    defender_after = defender.strength - dmg_to_defender
    attacker_after = unit.strength - dmg_to_attacker

    # Damage points go to the inflicting side's combat score.
    gains = {Faction.BLUE: 0, Faction.RED: 0}
    gains[unit.faction] += dmg_to_defender
    gains[defender.faction] += dmg_to_attacker

    defender_removed = defender_after < cfg.removal_threshold
    attacker_removed = attacker_after < cfg.removal_threshold
    if defender_removed:
        gains[unit.faction] += max(defender_after, 0)
        del units[target_id]
        del occupied[dest]
    else:
        units[target_id] = replace(defender, strength=defender_after)
    if attacker_removed:
        gains[defender.faction] += max(attacker_after, 0)
        del units[unit_id]
        del occupied[unit.position]
    else:
        units[unit_id] = replace(unit, strength=attacker_after, can_move=False)

    score = replace(
        score,
        blue_combat=score.blue_combat + gains[Faction.BLUE],
        red_combat=score.red_combat + gains[Faction.RED],
    )
    events.append(
        {
            "type": "attack",
            "attacker": unit_id,
            "faction": unit.faction.value,
            "defender": target_id,
            "target": list(dest),
            "damage_to_defender": dmg_to_defender,
            "damage_to_attacker": dmg_to_attacker,
            "defender_removed": defender_removed,
            "defender_residual": max(defender_after, 0) if defender_removed else 0,
            "attacker_removed": attacker_removed,
            "attacker_residual": max(attacker_after, 0) if attacker_removed else 0,
        }
    )
    return _rebuild(s, units, occupied, city_owner, score), events


def end_phase(s: GameState) -> tuple[GameState, dict]:
    """Score owned cities, advance the phase counter, hand the move over."""
    for u in s.units.values():
        if u.faction is s.on_move and u.can_move:
            raise ValueError(f"end_phase called mid-phase: unit {u.id} has not acted")

    blue_award = 0
    red_award = 0
    for owner in s.city_owner.values():
        if owner is Faction.BLUE:
            blue_award += CITY_POINTS_PER_PHASE
        elif owner is Faction.RED:
            red_award += CITY_POINTS_PER_PHASE

    score = replace(
        s.score,
        blue_city=s.score.blue_city + blue_award,
        red_city=s.score.red_city + red_award,
    )
    next_faction = s.on_move.enemy
    units = {
        uid: (replace(u, can_move=True) if u.faction is next_faction else u)
        for uid, u in s.units.items()
    }
    event = {
        "type": "phase_end",
        "phase": s.phase,
        "blue_city_points": blue_award,
        "red_city_points": red_award,
    }
    new = GameState(
        rows=s.rows,
        cols=s.cols,
        terrain=s.terrain,
        units=units,
        city_owner=s.city_owner,
        phase=s.phase + 1,
        phase_budget=s.phase_budget,
        on_move=next_faction,
        score=score,
        seed=s.seed,
        combat=s.combat,
        occupied=dict(s.occupied),
    )
    return new, event


def total_score(s: GameState) -> int:
    """Game score from the blue player's perspective."""
    return s.score.total


def is_terminal(s: GameState) -> tuple[bool, str | None]:
    """Terminal when a roster is empty or the phase budget is exhausted."""
    has_blue = any(u.faction is Faction.BLUE for u in s.units.values())
    has_red = any(u.faction is Faction.RED for u in s.units.values())
    if not has_blue:
        return True, "blue_eliminated"
    if not has_red:
        return True, "red_eliminated"
    if s.phase >= s.phase_budget:
        return True, "phase_budget"
    return False, None


def score_from_events(events: list[dict]) -> ScoreBreakdown:
    """Recompute the cumulative score breakdown from an event log."""
    blue_city = blue_combat = red_city = red_combat = 0
    for e in events:
        kind = e["type"]
        if kind == "phase_end":
            blue_city += e["blue_city_points"]
            red_city += e["red_city_points"]
        elif kind == "attack":
            attacker_blue = e["faction"] == Faction.BLUE.value
            to_def = e["damage_to_defender"] + e["defender_residual"]
            to_att = e["damage_to_attacker"] + e["attacker_residual"]
            if attacker_blue:
                blue_combat += to_def
                red_combat += to_att
            else:
                red_combat += to_def
                blue_combat += to_att
    return ScoreBreakdown(blue_city, blue_combat, red_city, red_combat)


def mirror_state(s: GameState) -> GameState:
    """Vertically flip the board and swap factions.

    Only valid for boards with an odd number of rows, where the flip
    (row -> rows-1-row) is a hex-grid automorphism. Scores and city owners
    swap sides; the on-move faction flips with them.
    """
    if s.rows % 2 == 0:
        raise ValueError("mirror_state requires an odd number of rows")

    def flip(h: Hex) -> Hex:
        return (s.rows - 1 - h[0], h[1])

    terrain = tuple(s.terrain[s.rows - 1 - r] for r in range(s.rows))
    units = {
        uid: replace(u, faction=u.faction.enemy, position=flip(u.position))
        for uid, u in s.units.items()
    }
    city_owner = {
        flip(h): (owner.enemy if owner is not None else None)
        for h, owner in s.city_owner.items()
    }
    score = ScoreBreakdown(
        blue_city=s.score.red_city,
        blue_combat=s.score.red_combat,
        red_city=s.score.blue_city,
        red_combat=s.score.blue_combat,
    )
    return GameState(
        rows=s.rows,
        cols=s.cols,
        terrain=terrain,
        units=units,
        city_owner=city_owner,
        phase=s.phase,
        phase_budget=s.phase_budget,
        on_move=s.on_move.enemy,
        score=score,
        seed=s.seed,
        combat=s.combat,
        occupied={u.position: u.id for u in units.values()},
    )


def state_to_message(s: GameState) -> dict:
    """JSON-ready snapshot of the state, used by the UI protocol and replays."""
    uid = current_unit_id(s)
    terminal, reason = is_terminal(s)
    destinations = []
    if uid is not None:
        legal = legal_actions(s, uid)
        mask = [k in legal for k in range(NUM_ACTIONS)]
        pos = s.units[uid].position
        for k in legal:
            if k < 6:
                r, c = neighbor(pos, k)
                destinations.append({"action": k, "row": r, "col": c})
    else:
        mask = [False] * 6 + [True]
    return {
        "rows": s.rows,
        "cols": s.cols,
        "terrain": [[t.value for t in row] for row in s.terrain],
        "units": [
            {
                "id": u.id,
                "faction": u.faction.value,
                "type": u.type.value,
                "strength": u.strength,
                "row": u.position[0],
                "col": u.position[1],
                "can_move": u.can_move,
            }
            for u in sorted(s.units.values(), key=lambda u: u.id)
        ],
        "cities": [
            {"row": h[0], "col": h[1], "owner": owner.value if owner else None}
            for h, owner in sorted(s.city_owner.items())
        ],
        "phase": s.phase,
        "phase_budget": s.phase_budget,
        "on_move": s.on_move.value,
        "on_move_unit": uid,
        "legal_mask": mask,
        "legal_destinations": destinations,
        "score": s.score.as_dict(),
        "terminal": terminal,
        "reason": reason,
    }


def _rebuild(
    s: GameState,
    units: dict[int, Unit],
    occupied: dict[Hex, int],
    city_owner: dict[Hex, Faction | None],
    score: ScoreBreakdown,
) -> GameState:
    return GameState(
        rows=s.rows,
        cols=s.cols,
        terrain=s.terrain,
        units=units,
        city_owner=city_owner,
        phase=s.phase,
        phase_budget=s.phase_budget,
        on_move=s.on_move,
        score=score,
        seed=s.seed,
        combat=s.combat,
        occupied=occupied,
    )


__all__ = [
    "CITY_POINTS_PER_PHASE",
    "PASS_ACTION",
    "NUM_ACTIONS",
    "Faction",
    "UnitType",
    "Terrain",
    "Unit",
    "ScoreBreakdown",
    "CombatConfig",
    "GameState",
    "IllegalActionError",
    "round_half_away",
    "current_unit_id",
    "legal_actions",
    "apply_action",
    "end_phase",
    "total_score",
    "is_terminal",
    "score_from_events",
    "mirror_state",
    "state_to_message",
]
