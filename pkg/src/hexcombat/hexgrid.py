"""Hex coordinate math: odd-r offset layout, adjacency, planar embedding, angles.

Conventions used project-wide:

- Hexes are (row, col) tuples in an "odd-r" offset layout: odd rows are
  shifted +0.5 in x. Row 0 is the top (north) edge of the board.
- Adjacent hex centers are exactly distance 1 apart in the planar embedding.
- Angles are measured counterclockwise from east (+x), with north taken
  toward row 0. Due east is 0, due north 90, due west 180.
"""

from __future__ import annotations

import math
from enum import IntEnum

Hex = tuple[int, int]
PlanarPoint = tuple[float, float]

SQRT3_2 = math.sqrt(3.0) / 2.0


class Direction(IntEnum):
    """The six hex directions in canonical order. Opposite of k is (k+3) % 6."""

    E = 0
    NE = 1
    NW = 2
    W = 3
    SW = 4
    SE = 5

    @property
    def opposite(self) -> "Direction":
        return Direction((self + 3) % 6)


# (drow, dcol) per direction, indexed by row parity. North is toward row 0.
_EVEN_ROW_OFFSETS = ((0, 1), (-1, 0), (-1, -1), (0, -1), (1, -1), (1, 0))
_ODD_ROW_OFFSETS = ((0, 1), (-1, 1), (-1, 0), (0, -1), (1, 0), (1, 1))


def to_planar(h: Hex) -> PlanarPoint:
    """Planar center of a hex, in hex-pitch units (adjacent centers are 1 apart)."""
    row, col = h
    return (col + 0.5 * (row % 2), row * SQRT3_2)


def neighbor(h: Hex, direction: int) -> Hex:
    """The adjacent hex in the given direction, ignoring board bounds."""
    row, col = h
    dr, dc = (_ODD_ROW_OFFSETS if row & 1 else _EVEN_ROW_OFFSETS)[direction]
    return (row + dr, col + dc)


def in_bounds(h: Hex, rows: int, cols: int) -> bool:
    return 0 <= h[0] < rows and 0 <= h[1] < cols


def neighbors(h: Hex, rows: int, cols: int) -> list[tuple[Direction, Hex]]:
    """In-bounds neighbors of h in canonical direction order.

    Off-board directions are omitted. Raises ValueError if h itself is out
    of bounds.
    """
    if not in_bounds(h, rows, cols):
        raise ValueError(f"hex {h} out of bounds for {rows}x{cols} board")
    row, col = h
    offsets = _ODD_ROW_OFFSETS if row & 1 else _EVEN_ROW_OFFSETS
    result = []
    for k, (dr, dc) in enumerate(offsets):
        r, c = row + dr, col + dc
        if 0 <= r < rows and 0 <= c < cols:
            result.append((Direction(k), (r, c)))
    return result


def euclid(a: Hex, b: Hex) -> float:
    """Euclidean distance between hex centers in the planar embedding."""
    ax, ay = to_planar(a)
    bx, by = to_planar(b)
    dx = bx - ax
    dy = by - ay
    return math.sqrt(dx * dx + dy * dy)


def angle_deg(a: Hex, b: Hex) -> float:
    """CCW angle in [0, 360) of the vector from a to b, measured from east.

    North (toward row 0) is 90. Raises ValueError when a == b.
    """
    if a == b:
        raise ValueError("angle undefined for identical hexes")
    ax, ay = to_planar(a)
    bx, by = to_planar(b)
    # Planar y grows southward with row; negate so angles run CCW with north up.
    return math.degrees(math.atan2(-(by - ay), bx - ax)) % 360.0


def to_cube(h: Hex) -> tuple[int, int, int]:
    row, col = h
    x = col - (row - (row & 1)) // 2
    z = row
    return (x, -x - z, z)


def hex_distance(a: Hex, b: Hex) -> int:
    """Shortest-path hex count between a and b on an unobstructed board."""
    ax, ay, az = to_cube(a)
    bx, by, bz = to_cube(b)
    return (abs(ax - bx) + abs(ay - by) + abs(az - bz)) // 2
