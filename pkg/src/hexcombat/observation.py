"""Observation tensors: the 18-channel global grid and the localized 7x7 form.

Global channels (channel-major, values in [0, 1] except channel 17):

    0  on-move unit (one-hot)          9  terrain: clear
    1  blue units still movable       10  terrain: rough
    2  legal destinations for 0       11  terrain: urban
    3  blue health (strength/100)     12  terrain: water
    4  red health                     13  terrain: marsh
    5  unit type: infantry            14  city owned by blue
    6  unit type: mechanized          15  city owned by red
    7  unit type: artillery           16  phase fraction (constant fill)
    8  unit type: other               17  normalized score (constant fill)

The localized form is always 18x7x7, centered on the on-move unit: the inner
5x5 copies the global values verbatim (off-board cells are zero), and every
on-board hex outside that box is weighted by piecewise linear spatial decay,
then pooled by 15-degree radial sector into one of the 24 perimeter cells,
with each pooled sum capped at 1.0. Channels 16 and 17 are constant fills and
are broadcast over the whole 7x7 instead of pooled.

Tensors are numpy float64 arrays. ``localize_oracle`` is a deliberately naive
pure-Python reference used by the test suite; it must match ``localize``
exactly.
"""

from __future__ import annotations

import base64
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .hexgrid import Hex, angle_deg, euclid, neighbor
from .simcore import (
    Faction,
    GameState,
    Terrain,
    UnitType,
    current_unit_id,
    legal_actions,
    total_score,
)

NUM_CHANNELS = 18
LOCAL_SIZE = 7
LOCAL_CENTER = 3
INNER_HALF = 2  # inner box spans offsets -2..2 in both row and col
NUM_SECTORS = 24
SECTOR_WIDTH_DEG = 360.0 / NUM_SECTORS

CH_ON_MOVE = 0
CH_BLUE_MOVABLE = 1
CH_LEGAL = 2
CH_BLUE_HP = 3
CH_RED_HP = 4
CH_TYPE = {
    UnitType.INFANTRY: 5,
    UnitType.MECHANIZED: 6,
    UnitType.ARTILLERY: 7,
    UnitType.OTHER: 8,
}
CH_TERRAIN = {
    Terrain.CLEAR: 9,
    Terrain.ROUGH: 10,
    Terrain.URBAN: 11,
    Terrain.WATER: 12,
    Terrain.MARSH: 13,
}
CH_CITY_BLUE = 14
CH_CITY_RED = 15
CH_PHASE = 16
CH_SCORE = 17

DEFAULT_SCORE_NORM = 1000.0


@dataclass(frozen=True)
class DecayParams:
    """Breakpoints and floors of the piecewise linear decay weight."""

    inner_radius: float = 3.0
    mid_radius: float = 7.0
    far_radius: float = 100.0
    mid_floor: float = 0.1
    far_floor: float = 0.01

    def __post_init__(self):
        if not (0 < self.far_floor < self.mid_floor < 1):
            raise ValueError("floors must satisfy 0 < far_floor < mid_floor < 1")
        if not (0 < self.inner_radius < self.mid_radius < self.far_radius):
            raise ValueError("radii must be increasing and positive")


DEFAULT_DECAY = DecayParams()


def decay_weight(d: float, params: DecayParams = DEFAULT_DECAY) -> float:
    """Piecewise linear spatial decay weight for a Euclidean distance d.

    With default parameters: 1 for d <= 3, then linear down to 0.1 at d = 7,
    then linear down to 0.01 at d = 100, constant 0.01 beyond.
    """
    if d < 0:
        raise ValueError("distance must be nonnegative")
    p = params
    if d <= p.inner_radius:
        return 1.0
    if d < p.mid_radius:
        return 1.0 - (1.0 - p.mid_floor) * (d - p.inner_radius) / (p.mid_radius - p.inner_radius)
    if d < p.far_radius:
        return p.mid_floor - (p.mid_floor - p.far_floor) * (d - p.mid_radius) / (p.far_radius - p.mid_radius)
    return p.far_floor


class SectorMap:
    """Bijection between the 24 radial sectors and the 7x7 perimeter cells.

    Sector 0 is centered due east, advancing counterclockwise in 15-degree
    steps. Perimeter cells are ordered by the CCW angle of their square-grid
    offset from the center; all 24 angles are distinct, so the k-th cell in
    that order belongs to sector k.
    """

    def __init__(self, size: int = LOCAL_SIZE):
        center = size // 2
        cells = []
        for r in range(size):
            for c in range(size):
                if r in (0, size - 1) or c in (0, size - 1):
                    ang = math.degrees(math.atan2(-(r - center), c - center)) % 360.0
                    cells.append((ang, (r, c)))
        cells.sort()
        self._cells = tuple(cell for _, cell in cells)
        self._sector_of_cell = {cell: k for k, cell in enumerate(self._cells)}

    @property
    def cells(self) -> tuple[tuple[int, int], ...]:
        return self._cells

    def cell_for_sector(self, k: int) -> tuple[int, int]:
        return self._cells[k]

    def sector_for_cell(self, cell: tuple[int, int]) -> int:
        return self._sector_of_cell[cell]


DEFAULT_SECTOR_MAP = SectorMap()


def sector_of(agent: Hex, target: Hex, sector_map: SectorMap = DEFAULT_SECTOR_MAP) -> int:
    """Radial sector index of a target hex relative to the agent.

    Only defined for hexes outside the inner 5x5 offset box around the agent.
    """
    dr = target[0] - agent[0]
    dc = target[1] - agent[1]
    if abs(dr) <= INNER_HALF and abs(dc) <= INNER_HALF:
        raise ValueError(f"target {target} lies inside the inner box around {agent}")
    ang = angle_deg(agent, target)
    return int((ang + SECTOR_WIDTH_DEG / 2.0) % 360.0 // SECTOR_WIDTH_DEG)


def build_global(
    s: GameState,
    unit_id: int | None = None,
    score_norm: float = DEFAULT_SCORE_NORM,
) -> np.ndarray:
    """The 18 x rows x cols global observation tensor for a state.

    ``unit_id`` defaults to the current on-move unit; channels 0 and 2 are all
    zero when no unit is on move (e.g. a terminal state).
    """
    g = np.zeros((NUM_CHANNELS, s.rows, s.cols), dtype=np.float64)
    if unit_id is None:
        unit_id = current_unit_id(s)

    for u in s.units.values():
        r, c = u.position
        if u.faction is Faction.BLUE:
            g[CH_BLUE_HP, r, c] = u.strength / 100.0
            if u.can_move:
                g[CH_BLUE_MOVABLE, r, c] = 1.0
        else:
            g[CH_RED_HP, r, c] = u.strength / 100.0
        g[CH_TYPE[u.type], r, c] = 1.0

    if unit_id is not None:
        mover = s.units[unit_id]
        g[CH_ON_MOVE, mover.position[0], mover.position[1]] = 1.0
        for k in legal_actions(s, unit_id):
            if k < 6:
                r, c = neighbor(mover.position, k)
                g[CH_LEGAL, r, c] = 1.0

    for r in range(s.rows):
        row = s.terrain[r]
        for c in range(s.cols):
            g[CH_TERRAIN[row[c]], r, c] = 1.0

    for h, owner in s.city_owner.items():
        if owner is Faction.BLUE:
            g[CH_CITY_BLUE, h[0], h[1]] = 1.0
        elif owner is Faction.RED:
            g[CH_CITY_RED, h[0], h[1]] = 1.0

    g[CH_PHASE, :, :] = s.phase / s.phase_budget
    g[CH_SCORE, :, :] = min(max(total_score(s) / score_norm, -1.0), 1.0)
    return g


@lru_cache(maxsize=4096)
def _perimeter_plan(
    rows: int, cols: int, agent: Hex, params: DecayParams
) -> tuple[tuple[int, int, int, float], ...]:
    """Per-hex pooling plan for localize: (row, col, sector, weight) for every
    on-board hex outside the inner box, in row-major order."""
    plan = []
    ar, ac = agent
    for r in range(rows):
        for c in range(cols):
            if abs(r - ar) <= INNER_HALF and abs(c - ac) <= INNER_HALF:
                continue
            w = decay_weight(euclid(agent, (r, c)), params)
            k = sector_of(agent, (r, c))
            plan.append((r, c, k, w))
    return tuple(plan)


def localize(
    g: np.ndarray,
    agent: Hex,
    params: DecayParams = DEFAULT_DECAY,
    sector_map: SectorMap = DEFAULT_SECTOR_MAP,
) -> np.ndarray:
    """Compress a global tensor into the localized 18x7x7 form around the agent."""
    channels, rows, cols = g.shape
    if channels != NUM_CHANNELS:
        raise ValueError(f"expected {NUM_CHANNELS} channels, got {channels}")
    ar, ac = agent
    if not (0 <= ar < rows and 0 <= ac < cols):
        raise ValueError(f"agent {agent} out of bounds for {rows}x{cols} board")

    out = np.zeros((NUM_CHANNELS, LOCAL_SIZE, LOCAL_SIZE), dtype=np.float64)

    # Inner 5x5: verbatim copy, off-board cells stay zero.
    for dr in range(-INNER_HALF, INNER_HALF + 1):
        r = ar + dr
        if not (0 <= r < rows):
            continue
        for dc in range(-INNER_HALF, INNER_HALF + 1):
            c = ac + dc
            if 0 <= c < cols:
                out[:16, LOCAL_CENTER + dr, LOCAL_CENTER + dc] = g[:16, r, c]

    # Perimeter: decay-weighted radial pooling, capped at 1.0 per cell.
    acc = np.zeros((16, NUM_SECTORS), dtype=np.float64)
    for r, c, k, w in _perimeter_plan(rows, cols, agent, params):
        acc[:, k] += g[:16, r, c] * w
    np.minimum(acc, 1.0, out=acc)
    for k in range(NUM_SECTORS):
        cr, cc = sector_map.cell_for_sector(k)
        out[:16, cr, cc] = acc[:, k]

    # Constant-fill channels broadcast their scalar over the whole 7x7.
    out[CH_PHASE, :, :] = g[CH_PHASE, 0, 0]
    out[CH_SCORE, :, :] = g[CH_SCORE, 0, 0]
    return out


def localize_oracle(
    g: np.ndarray,
    agent: Hex,
    params: DecayParams = DEFAULT_DECAY,
    sector_map: SectorMap = DEFAULT_SECTOR_MAP,
) -> np.ndarray:
    """Naive reference implementation of localize, for tests only.

    Re-derives the planar embedding, decay weight, sector binning, and
    perimeter cell ordering from scratch with plain Python loops.
    """
    channels, rows, cols = g.shape
    if channels != NUM_CHANNELS:
        raise ValueError(f"expected {NUM_CHANNELS} channels, got {channels}")
    ar, ac = agent
    if not (0 <= ar < rows and 0 <= ac < cols):
        raise ValueError(f"agent {agent} out of bounds for {rows}x{cols} board")

    sqrt3_2 = math.sqrt(3.0) / 2.0
    out = [[[0.0] * LOCAL_SIZE for _ in range(LOCAL_SIZE)] for _ in range(NUM_CHANNELS)]

    for ch in range(16):
        for dr in range(-2, 3):
            for dc in range(-2, 3):
                r, c = ar + dr, ac + dc
                if 0 <= r < rows and 0 <= c < cols:
                    out[ch][3 + dr][3 + dc] = float(g[ch][r][c])

    ax = ac + 0.5 * (ar % 2)
    ay = ar * sqrt3_2
    pooled = [[0.0] * NUM_SECTORS for _ in range(16)]
    for r in range(rows):
        for c in range(cols):
            if abs(r - ar) <= 2 and abs(c - ac) <= 2:
                continue
            x = c + 0.5 * (r % 2)
            y = r * sqrt3_2
            dx = x - ax
            dy = y - ay
            d = math.sqrt(dx * dx + dy * dy)
            if d <= params.inner_radius:
                w = 1.0
            elif d < params.mid_radius:
                w = 1.0 - (1.0 - params.mid_floor) * (d - params.inner_radius) / (
                    params.mid_radius - params.inner_radius
                )
            elif d < params.far_radius:
                w = params.mid_floor - (params.mid_floor - params.far_floor) * (
                    d - params.mid_radius
                ) / (params.far_radius - params.mid_radius)
            else:
                w = params.far_floor
            ang = math.degrees(math.atan2(-dy, dx)) % 360.0
            k = int((ang + 7.5) % 360.0 // 15.0)
            for ch in range(16):
                pooled[ch][k] += float(g[ch][r][c]) * w

    # Perimeter cell order: sort the 24 edge cells of the 7x7 by CCW angle.
    ordered = sorted(
        (
            (math.degrees(math.atan2(-(r - 3), c - 3)) % 360.0, (r, c))
            for r in range(LOCAL_SIZE)
            for c in range(LOCAL_SIZE)
            if r in (0, LOCAL_SIZE - 1) or c in (0, LOCAL_SIZE - 1)
        )
    )
    for k, (_, (cr, cc)) in enumerate(ordered):
        for ch in range(16):
            out[ch][cr][cc] = min(pooled[ch][k], 1.0)

    phase_fill = float(g[CH_PHASE][0][0])
    score_fill = float(g[CH_SCORE][0][0])
    for rr in range(LOCAL_SIZE):
        for cc in range(LOCAL_SIZE):
            out[CH_PHASE][rr][cc] = phase_fill
            out[CH_SCORE][rr][cc] = score_fill
    return np.asarray(out, dtype=np.float64)


def tensor_to_bytes(t: np.ndarray) -> bytes:
    """Flat little-endian float32 encoding: channel-major, row-major within channel."""
    return np.ascontiguousarray(t, dtype="<f4").tobytes()


def tensor_from_bytes(data: bytes, shape: tuple[int, ...]) -> np.ndarray:
    return np.frombuffer(data, dtype="<f4").reshape(shape).astype(np.float64)


def tensor_to_nested(t: np.ndarray) -> list:
    """Nested-list JSON wire form."""
    return t.tolist()


def tensor_to_b64(t: np.ndarray) -> str:
    return base64.b64encode(tensor_to_bytes(t)).decode("ascii")


__all__ = [
    "NUM_CHANNELS",
    "LOCAL_SIZE",
    "NUM_SECTORS",
    "CH_ON_MOVE",
    "CH_BLUE_MOVABLE",
    "CH_LEGAL",
    "CH_BLUE_HP",
    "CH_RED_HP",
    "CH_TYPE",
    "CH_TERRAIN",
    "CH_CITY_BLUE",
    "CH_CITY_RED",
    "CH_PHASE",
    "CH_SCORE",
    "DecayParams",
    "DEFAULT_DECAY",
    "decay_weight",
    "SectorMap",
    "DEFAULT_SECTOR_MAP",
    "sector_of",
    "build_global",
    "localize",
    "localize_oracle",
    "tensor_to_bytes",
    "tensor_from_bytes",
    "tensor_to_nested",
    "tensor_to_b64",
]
