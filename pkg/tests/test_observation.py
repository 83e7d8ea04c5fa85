import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from helpers import random_states
from hexcombat.observation import (
    CH_BLUE_HP,
    CH_CITY_BLUE,
    CH_LEGAL,
    CH_ON_MOVE,
    CH_PHASE,
    CH_RED_HP,
    CH_SCORE,
    DEFAULT_SECTOR_MAP,
    DecayParams,
    NUM_CHANNELS,
    NUM_SECTORS,
    SectorMap,
    build_global,
    decay_weight,
    localize,
    localize_oracle,
    sector_of,
    tensor_from_bytes,
    tensor_to_b64,
    tensor_to_bytes,
)
from hexcombat.scenario import generate, instantiate
from hexcombat.simcore import current_unit_id


class TestDecayWeight:
    def test_breakpoint_values(self):
        assert decay_weight(0.0) == 1.0
        assert decay_weight(3.0) == 1.0
        assert decay_weight(4.0) == 0.775
        assert decay_weight(7.0) == 0.1
        assert decay_weight(100.0) == 0.01
        assert decay_weight(500.0) == 0.01

    def test_mid_segment_substitution(self):
        # 1 - 0.9 * (5-3)/4 = 0.55
        assert decay_weight(5.0) == 0.55

    def test_continuity_at_breakpoints(self):
        for bp in (3.0, 7.0, 100.0):
            below = decay_weight(bp - 1e-12)
            above = decay_weight(bp + 1e-12)
            assert abs(below - decay_weight(bp)) <= 1e-9
            assert abs(above - decay_weight(bp)) <= 1e-9

    def test_negative_distance_rejected(self):
        with pytest.raises(ValueError):
            decay_weight(-0.1)

    @given(st.floats(min_value=0, max_value=150), st.floats(min_value=0, max_value=150))
    def test_monotone_nonincreasing(self, a, b):
        lo, hi = sorted((a, b))
        assert decay_weight(lo) >= decay_weight(hi)

    @given(st.floats(min_value=0, max_value=1e6))
    def test_range(self, d):
        assert 0.01 <= decay_weight(d) <= 1.0

    def test_param_validation(self):
        with pytest.raises(ValueError):
            DecayParams(mid_floor=0.005)  # below far floor


class TestSectorMap:
    def test_bijection_over_perimeter(self):
        m = SectorMap()
        cells = {m.cell_for_sector(k) for k in range(NUM_SECTORS)}
        assert len(cells) == NUM_SECTORS
        for r, c in cells:
            assert r in (0, 6) or c in (0, 6)
        for k in range(NUM_SECTORS):
            assert m.sector_for_cell(m.cell_for_sector(k)) == k

    def test_cardinal_cells(self):
        m = DEFAULT_SECTOR_MAP
        assert m.cell_for_sector(0) == (3, 6)   # east
        assert m.cell_for_sector(6) == (0, 3)   # north
        assert m.cell_for_sector(12) == (3, 0)  # west
        assert m.cell_for_sector(18) == (6, 3)  # south


class TestSectorOf:
    def test_due_east(self):
        assert sector_of((5, 0), (5, 8)) == 0

    def test_due_west(self):
        assert sector_of((5, 8), (5, 0)) == 12

    def test_thirty_degrees(self):
        # (6,0) -> (3,4): dx = 4.5, rise = 3*sqrt(3)/2, exactly 30 degrees -> bin 2
        assert math.isclose(math.degrees(math.atan2(3 * math.sqrt(3) / 2, 4.5)), 30.0)
        assert sector_of((6, 0), (3, 4)) == 2

    def test_inner_box_rejected(self):
        with pytest.raises(ValueError):
            sector_of((5, 5), (4, 4))


class TestBuildGlobal:
    def test_on_move_one_hot(self):
        s = instantiate(generate(5, 7))
        g = build_global(s)
        assert g.shape == (NUM_CHANNELS, 5, 5)
        assert g[CH_ON_MOVE].sum() == 1.0
        uid = current_unit_id(s)
        r, c = s.units[uid].position
        assert g[CH_ON_MOVE, r, c] == 1.0

    def test_health_scaling(self):
        from dataclasses import replace

        s = instantiate(generate(5, 7))
        uid = current_unit_id(s)
        s.units[uid] = replace(s.units[uid], strength=50)
        g = build_global(s)
        r, c = s.units[uid].position
        assert g[CH_BLUE_HP, r, c] == 0.5

    def test_single_urban_hex(self):
        s = instantiate(generate(6, 3))
        g = build_global(s)
        urban = g[11]  # terrain one-hot for urban
        assert urban.sum() == 1.0

    def test_binary_channels(self):
        for _, s in random_states([5, 8], 5):
            g = build_global(s)
            for ch in (0, 1, 2, *range(5, 16)):
                assert set(np.unique(g[ch])) <= {0.0, 1.0}
            assert np.all(g[:17] >= 0) and np.all(g[:17] <= 1)
            assert np.all(g[17] >= -1) and np.all(g[17] <= 1)

    def test_constant_fill_channels(self):
        s = instantiate(generate(5, 2))
        g = build_global(s)
        assert np.all(g[CH_PHASE] == s.phase / s.phase_budget)
        assert np.all(g[CH_SCORE] == 0.0)

    def test_legal_channel_marks_destinations(self):
        s = instantiate(generate(5, 7))
        g = build_global(s)
        from hexcombat.simcore import legal_actions
        from hexcombat.hexgrid import neighbor

        uid = current_unit_id(s)
        pos = s.units[uid].position
        expected = {neighbor(pos, k) for k in legal_actions(s, uid) if k < 6}
        marked = {(r, c) for r, c in zip(*np.nonzero(g[CH_LEGAL]))}
        assert marked == expected


def states_sample(per_size=6):
    return random_states(range(3, 13), per_size, seed=5)


class TestLocalize:
    def test_small_board_embeds_in_inner_grid(self):
        s = instantiate(generate(3, 1))
        g = build_global(s)
        out = localize(g, (1, 1))
        # the whole 3x3 board fits inside the inner box; perimeter stays zero
        perim = [(r, c) for r in range(7) for c in range(7) if r in (0, 6) or c in (0, 6)]
        for ch in range(16):
            for r, c in perim:
                assert out[ch, r, c] == 0.0
        assert np.array_equal(out[:16, 2:5, 2:5], g[:16])

    def test_enemy_at_distance_four_due_east(self):
        # one full-strength red unit four hexes due east contributes w(4) = 0.775
        g = np.zeros((18, 12, 12))
        g[CH_RED_HP, 6, 5] = 1.0
        out = localize(g, (6, 1))
        cell = DEFAULT_SECTOR_MAP.cell_for_sector(0)
        assert out[CH_RED_HP, cell[0], cell[1]] == 0.775

    def test_same_sector_sums_clip_to_one(self):
        g = np.zeros((18, 12, 12))
        g[CH_RED_HP, 6, 5] = 1.0  # d=4 -> 0.775
        g[CH_RED_HP, 6, 6] = 1.0  # d=5 -> 0.55
        out = localize(g, (6, 1))
        cell = DEFAULT_SECTOR_MAP.cell_for_sector(0)
        # 0.775 + 0.55 = 1.325 capped at 1.0
        assert out[CH_RED_HP, cell[0], cell[1]] == 1.0

    def test_inner_copy_is_verbatim(self):
        for _, s in states_sample(4):
            uid = current_unit_id(s)
            if uid is None:
                continue
            ar, ac = s.units[uid].position
            g = build_global(s)
            out = localize(g, (ar, ac))
            for dr in range(-2, 3):
                for dc in range(-2, 3):
                    r, c = ar + dr, ac + dc
                    if 0 <= r < s.rows and 0 <= c < s.cols:
                        assert np.array_equal(out[:16, 3 + dr, 3 + dc], g[:16, r, c])
                    else:
                        assert np.all(out[:16, 3 + dr, 3 + dc] == 0.0)

    def test_shape_and_range_all_sizes(self):
        for n, s in states_sample(3):
            uid = current_unit_id(s)
            g = build_global(s)
            agent = s.units[uid].position if uid is not None else (0, 0)
            out = localize(g, agent)
            assert out.shape == (18, 7, 7)
            assert np.all(out[:16] >= 0.0) and np.all(out[:16] <= 1.0)

    def test_broadcast_channels(self):
        s = instantiate(generate(9, 4))
        g = build_global(s)
        out = localize(g, (4, 4))
        assert np.all(out[CH_PHASE] == g[CH_PHASE, 0, 0])
        assert np.all(out[CH_SCORE] == g[CH_SCORE, 0, 0])

    def test_zero_tensor_stays_zero(self):
        g = np.zeros((18, 9, 9))
        out = localize(g, (4, 4))
        assert np.all(out[:16] == 0.0)

    def test_agent_out_of_bounds_rejected(self):
        g = np.zeros((18, 5, 5))
        with pytest.raises(ValueError):
            localize(g, (5, 0))
        with pytest.raises(ValueError):
            localize_oracle(g, (5, 0))

    def test_translation_covariance(self):
        # Shift all content by an even row offset, away from any board edge.
        g = np.zeros((18, 12, 12))
        g[CH_RED_HP, 3, 9] = 0.8
        g[CH_BLUE_HP, 9, 2] = 0.6
        g[CH_CITY_BLUE, 2, 7] = 1.0
        agent = (5, 5)
        shifted = np.zeros((18, 12, 12))
        shifted[CH_RED_HP, 5, 10] = 0.8
        shifted[CH_BLUE_HP, 11, 3] = 0.6
        shifted[CH_CITY_BLUE, 4, 8] = 1.0
        assert np.array_equal(localize(g, agent), localize(shifted, (7, 6)))

    def test_swapping_equal_distance_same_sector_units(self):
        # (5,8) and (7,8) from (6,0) are symmetric: same distance, both sector 0.
        assert sector_of((6, 0), (5, 8)) == 0
        assert sector_of((6, 0), (7, 8)) == 0
        a = np.zeros((18, 12, 12))
        a[CH_RED_HP, 5, 8] = 0.9
        a[CH_RED_HP, 7, 8] = 0.5
        b = np.zeros((18, 12, 12))
        b[CH_RED_HP, 5, 8] = 0.5
        b[CH_RED_HP, 7, 8] = 0.9
        assert np.array_equal(localize(a, (6, 0)), localize(b, (6, 0)))


class TestOracleEquivalence:
    def test_oracle_matches_on_random_states(self):
        checked = 0
        for n, s in random_states(range(3, 13), 25, seed=11):
            uid = current_unit_id(s)
            agent = s.units[uid].position if uid is not None else (n // 2, n // 2)
            g = build_global(s)
            assert np.array_equal(localize(g, agent), localize_oracle(g, agent)), (
                f"divergence at size {n}, agent {agent}"
            )
            checked += 1
        assert checked == 250

    def test_oracle_matches_with_custom_params(self):
        params = DecayParams(inner_radius=2.0, mid_radius=5.0, far_radius=20.0,
                             mid_floor=0.2, far_floor=0.05)
        for n, s in random_states([8, 12], 10, seed=13):
            uid = current_unit_id(s)
            agent = s.units[uid].position if uid is not None else (n // 2, n // 2)
            g = build_global(s)
            assert np.array_equal(
                localize(g, agent, params), localize_oracle(g, agent, params)
            )


class TestSerialization:
    def test_bytes_roundtrip(self):
        s = instantiate(generate(5, 21))
        g = build_global(s)
        data = tensor_to_bytes(g)
        assert len(data) == 18 * 5 * 5 * 4
        back = tensor_from_bytes(data, (18, 5, 5))
        assert np.allclose(back, g, atol=1e-6)

    def test_layout_is_channel_major_row_major(self):
        t = np.arange(18 * 2 * 3, dtype=np.float64).reshape(18, 2, 3)
        data = tensor_to_bytes(t)
        flat = np.frombuffer(data, dtype="<f4")
        assert flat[0] == t[0, 0, 0]
        assert flat[1] == t[0, 0, 1]
        assert flat[3] == t[0, 1, 0]
        assert flat[6] == t[1, 0, 0]

    def test_b64_is_ascii(self):
        s = instantiate(generate(3, 2))
        g = build_global(s)
        encoded = tensor_to_b64(g)
        assert isinstance(encoded, str)
        import base64

        assert base64.b64decode(encoded) == tensor_to_bytes(g)
