"""Random scenario generation for square boards of size 3 through 12.

Each scenario has one urban hex on otherwise clear terrain, a per-faction
unit count drawn uniformly between round(n/2) and n, and a phase budget of
4n. Blue spawns in the bottom band of the board, red in the top band. The
city goes on the weaker faction's side of the board, or on the middle axis
when the sides are even.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .hexgrid import Hex
from .simcore import (
    CombatConfig,
    Faction,
    GameState,
    ScoreBreakdown,
    Terrain,
    Unit,
    UnitType,
    round_half_away,
)

MIN_SIZE = 3
MAX_SIZE = 12
PHASES_PER_LENGTH = 4


@dataclass(frozen=True)
class ScenarioSpec:
    size: int
    blue_units: tuple[Hex, ...]
    red_units: tuple[Hex, ...]
    city: Hex
    phase_budget: int
    seed: int

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "blue_units": [list(p) for p in self.blue_units],
            "red_units": [list(p) for p in self.red_units],
            "city": list(self.city),
            "phase_budget": self.phase_budget,
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ScenarioSpec":
        return cls(
            size=data["size"],
            blue_units=tuple((r, c) for r, c in data["blue_units"]),
            red_units=tuple((r, c) for r, c in data["red_units"]),
            city=(data["city"][0], data["city"][1]),
            phase_budget=data["phase_budget"],
            seed=data["seed"],
        )


def min_units(n: int) -> int:
    """Minimum per-faction unit count: n/2 rounded half away from zero."""
    return round_half_away(n / 2)


def spawn_band_rows(n: int, faction: Faction) -> range:
    """Spawn rows: red holds the top ceil(n/3) rows, blue the bottom ones."""
    band = math.ceil(n / 3)
    if faction is Faction.RED:
        return range(0, band)
    return range(n - band, n)


def middle_axis_rows(n: int) -> tuple[int, ...]:
    """The board's middle axis: one center row for odd n, two for even n."""
    if n % 2 == 1:
        return (n // 2,)
    return (n // 2 - 1, n // 2)


def side_rows(n: int, faction: Faction) -> range:
    """A faction's side of the board: its spawn edge up to (excluding) the middle axis."""
    if faction is Faction.RED:
        return range(0, middle_axis_rows(n)[0])
    return range(middle_axis_rows(n)[-1] + 1, n)


def generate(n: int, seed: int) -> ScenarioSpec:
    """Random scenario at complexity level n, fully determined by the seed."""
    if not (MIN_SIZE <= n <= MAX_SIZE):
        raise ValueError(f"board size must be in [{MIN_SIZE}, {MAX_SIZE}], got {n}")
    rng = random.Random(seed)
    lo = min_units(n)

    blue_count = rng.randint(lo, n)
    red_count = rng.randint(lo, n)
    blue_cells = [(r, c) for r in spawn_band_rows(n, Faction.BLUE) for c in range(n)]
    red_cells = [(r, c) for r in spawn_band_rows(n, Faction.RED) for c in range(n)]
    blue_units = tuple(rng.sample(blue_cells, blue_count))
    red_units = tuple(rng.sample(red_cells, red_count))

    occupied = set(blue_units) | set(red_units)
    if blue_count == red_count:
        rows = middle_axis_rows(n)
    elif blue_count < red_count:
        rows = tuple(side_rows(n, Faction.BLUE))
    else:
        rows = tuple(side_rows(n, Faction.RED))
    candidates = [(r, c) for r in rows for c in range(n) if (r, c) not in occupied]
    city = rng.choice(candidates)

    return ScenarioSpec(
        size=n,
        blue_units=blue_units,
        red_units=red_units,
        city=city,
        phase_budget=PHASES_PER_LENGTH * n,
        seed=seed,
    )


def instantiate(spec: ScenarioSpec) -> GameState:
    """Fresh GameState for a spec: phase 0, blue on move, all strengths 100."""
    n = spec.size
    seen = set()
    for p in spec.blue_units + spec.red_units:
        if p in seen:
            raise ValueError(f"overlapping spawn at {p}")
        seen.add(p)

    terrain = tuple(
        tuple(Terrain.URBAN if (r, c) == spec.city else Terrain.CLEAR for c in range(n))
        for r in range(n)
    )
    units: dict[int, Unit] = {}
    uid = 0
    for pos in spec.blue_units:
        units[uid] = Unit(uid, Faction.BLUE, UnitType.INFANTRY, 100, pos, can_move=True)
        uid += 1
    for pos in spec.red_units:
        units[uid] = Unit(uid, Faction.RED, UnitType.INFANTRY, 100, pos, can_move=False)
        uid += 1

    return GameState(
        rows=n,
        cols=n,
        terrain=terrain,
        units=units,
        city_owner={spec.city: None},
        phase=0,
        phase_budget=spec.phase_budget,
        on_move=Faction.BLUE,
        score=ScoreBreakdown(),
        seed=spec.seed,
        combat=CombatConfig(),
    )


__all__ = [
    "MIN_SIZE",
    "MAX_SIZE",
    "PHASES_PER_LENGTH",
    "ScenarioSpec",
    "min_units",
    "spawn_band_rows",
    "middle_axis_rows",
    "side_rows",
    "generate",
    "instantiate",
]
