import math
from collections import deque

import pytest
from hypothesis import given, strategies as st

from hexcombat.hexgrid import (
    Direction,
    angle_deg,
    euclid,
    hex_distance,
    neighbor,
    neighbors,
    to_planar,
)

SQRT3_2 = math.sqrt(3) / 2

hex_rows = st.integers(min_value=0, max_value=20)
hex_cols = st.integers(min_value=0, max_value=20)
hexes = st.tuples(hex_rows, hex_cols)


def bfs_hex_steps(a, b, rows=30, cols=30):
    """Brute-force shortest-path step count on an open board (test oracle)."""
    if a == b:
        return 0
    dist = {a: 0}
    queue = deque([a])
    while queue:
        h = queue.popleft()
        for _, nb in neighbors(h, rows, cols):
            if nb not in dist:
                dist[nb] = dist[h] + 1
                if nb == b:
                    return dist[nb]
                queue.append(nb)
    raise AssertionError("unreachable")


class TestToPlanar:
    def test_origin(self):
        assert to_planar((0, 0)) == (0.0, 0.0)

    def test_east_neighbor_center(self):
        assert to_planar((0, 1)) == (1.0, 0.0)
        assert euclid((0, 0), (0, 1)) == 1.0

    def test_odd_row_shift(self):
        x, y = to_planar((1, 0))
        assert x == 0.5
        assert y == pytest.approx(SQRT3_2, abs=1e-15)
        assert euclid((0, 0), (1, 0)) == pytest.approx(1.0, abs=1e-15)


class TestNeighbors:
    def test_interior_has_six(self):
        result = neighbors((2, 2), 5, 5)
        assert len(result) == 6
        assert [d for d, _ in result] == list(Direction)

    def test_corner_clipped(self):
        assert len(neighbors((0, 0), 3, 3)) < 6

    def test_east_then_west_returns(self):
        h = (3, 3)
        assert neighbor(neighbor(h, Direction.E), Direction.W) == h

    def test_out_of_bounds_rejected(self):
        with pytest.raises(ValueError):
            neighbors((5, 0), 5, 5)

    @given(st.tuples(st.integers(1, 18), st.integers(1, 18)))
    def test_direction_inverse(self, h):
        for d in Direction:
            assert neighbor(neighbor(h, d), d.opposite) == h

    @given(st.tuples(st.integers(0, 19), st.integers(0, 19)))
    def test_all_neighbors_at_unit_distance(self, h):
        for _, nb in neighbors(h, 20, 20):
            assert abs(euclid(h, nb) - 1.0) <= 1e-12


class TestEuclid:
    def test_identity(self):
        assert euclid((4, 7), (4, 7)) == 0.0

    def test_same_row_span(self):
        # Straight-line planar distance agrees with the brute-force hex path count.
        assert euclid((0, 0), (0, 4)) == 4.0
        assert bfs_hex_steps((0, 0), (0, 4)) == 4
        assert hex_distance((0, 0), (0, 4)) == 4

    def test_symmetry(self):
        assert euclid((1, 2), (5, 9)) == euclid((5, 9), (1, 2))

    @given(hexes, hexes)
    def test_hex_distance_matches_bfs(self, a, b):
        assert hex_distance(a, b) == bfs_hex_steps(a, b)


class TestAngle:
    def test_due_east(self):
        assert angle_deg((3, 3), (3, 6)) == 0.0

    def test_due_west(self):
        assert angle_deg((3, 3), (3, 0)) == 180.0

    def test_due_north(self):
        # Even rows share the x offset, so the vector is straight up.
        assert angle_deg((2, 2), (0, 2)) == 90.0

    def test_identical_hexes_rejected(self):
        with pytest.raises(ValueError):
            angle_deg((1, 1), (1, 1))

    @given(hexes, hexes)
    def test_reverse_differs_by_half_turn(self, a, b):
        if a == b:
            return
        fwd = angle_deg(a, b)
        rev = angle_deg(b, a)
        diff = (fwd - rev) % 360.0
        assert abs(diff - 180.0) <= 1e-9
