import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairlattice import (
    CapacityError,
    ConfigError,
    InvalidSplitError,
    Lattice,
    LevelBoundsError,
    ONE,
    STAR,
    SubgroupSpec,
    ZERO,
    enumerate_level,
    shape,
)
from fairlattice.lattice import MAX_M_ENV_VAR, max_table_m


class TestSubgroupSpec:
    def test_level_counts_stars(self):
        assert SubgroupSpec((ZERO, STAR, ONE, STAR)).level == 2
        assert SubgroupSpec((ZERO, ONE)).level == 0
        assert SubgroupSpec((STAR, STAR)).level == 2

    def test_vertex_and_main(self):
        assert SubgroupSpec((ZERO, ONE)).is_vertex
        assert not SubgroupSpec((STAR, ONE)).is_vertex
        main = SubgroupSpec((STAR,) * 4)
        assert main.level == main.m == 4

    def test_first_star(self):
        assert SubgroupSpec((ZERO, STAR, STAR)).first_star() == 1
        assert SubgroupSpec((STAR, ZERO, ZERO)).first_star() == 0
        assert SubgroupSpec((ONE, ONE, ONE)).first_star() is None

    def test_split(self):
        low, high = SubgroupSpec((STAR, STAR)).split(0)
        assert low == SubgroupSpec((ZERO, STAR))
        assert high == SubgroupSpec((ONE, STAR))
        low, high = SubgroupSpec((ONE, STAR, ZERO)).split(1)
        assert low == SubgroupSpec((ONE, ZERO, ZERO))
        assert high == SubgroupSpec((ONE, ONE, ZERO))
        assert low.level == high.level == 0

    def test_split_rejects_non_star(self):
        with pytest.raises(InvalidSplitError):
            SubgroupSpec((ZERO, ONE)).split(0)
        with pytest.raises(InvalidSplitError):
            SubgroupSpec((STAR, ONE)).split(1)
        with pytest.raises(InvalidSplitError):
            SubgroupSpec((STAR,)).split(5)

    def test_string_round_trip(self):
        spec = SubgroupSpec.from_string("01*")
        assert spec.codes == (ZERO, ONE, STAR)
        assert str(spec) == "01*"
        with pytest.raises(ConfigError):
            SubgroupSpec.from_string("01x")

    def test_invalid_codes(self):
        with pytest.raises(ConfigError):
            SubgroupSpec((0, 3))
        with pytest.raises(ConfigError):
            SubgroupSpec(())

    def test_matches(self):
        spec = SubgroupSpec.from_string("1*0")
        assert spec.matches([1, 0, 0])
        assert spec.matches([1, 1, 0])
        assert not spec.matches([0, 1, 0])

    def test_vertices_enumeration(self):
        spec = SubgroupSpec.from_string("*1*")
        verts = list(spec.vertices())
        assert [str(v) for v in verts] == ["010", "011", "110", "111"]

    @given(st.integers(1, 8), st.data())
    @settings(max_examples=60, deadline=None)
    def test_index_round_trip(self, m, data):
        index = data.draw(st.integers(0, 3 ** m - 1))
        assert SubgroupSpec.from_index(index, m).index == index

    def test_index_round_trip_exhaustive(self):
        for m in range(1, 9):
            for index in range(3 ** m):
                assert SubgroupSpec.from_index(index, m).index == index


class TestEnumerateLevel:
    def test_m2_k1(self):
        specs = enumerate_level(2, 1)
        assert [str(s) for s in specs] == ["0*", "1*", "*0", "*1"]

    def test_vertex_count_m10(self):
        assert len(enumerate_level(10, 0)) == 1024

    def test_single_main_hypercube(self):
        specs = enumerate_level(4, 4)
        assert len(specs) == 1
        assert str(specs[0]) == "****"

    def test_counts_and_order(self):
        for m in range(1, 7):
            for k in range(m + 1):
                specs = enumerate_level(m, k)
                assert len(specs) == math.comb(m, k) * 2 ** (m - k)
                assert all(s.level == k for s in specs)
                indices = [s.index for s in specs]
                assert indices == sorted(indices)
                assert len(set(indices)) == len(indices)

    def test_level_out_of_range(self):
        with pytest.raises(LevelBoundsError):
            enumerate_level(3, 4)
        with pytest.raises(LevelBoundsError):
            enumerate_level(3, -1)


class TestShape:
    def test_m2(self):
        s = shape(2)
        assert s.h_total == 9
        assert s.h_per_level == (4, 4, 1)
        # direct summation of 2k * C(2,k) * 2**(2-k): 8 + 4
        assert s.edge_count == 12

    def test_m10_total(self):
        assert shape(10).h_total == 59049

    def test_m4_per_level(self):
        assert shape(4).h_per_level == (16, 32, 24, 8, 1)
        assert sum(shape(4).h_per_level) == 81

    def test_totals_and_edge_bound(self):
        for m in range(1, 13):
            s = shape(m)
            assert sum(s.h_per_level) == 3 ** m
            assert s.edge_count == sum(
                2 * k * math.comb(m, k) * 2 ** (m - k) for k in range(1, m + 1)
            )
            assert s.edge_count <= 2 * m * 3 ** m

    def test_capacity_guard(self):
        with pytest.raises(CapacityError):
            shape(17)
        with pytest.raises(ConfigError):
            shape(0)
        assert shape(17, max_m=18).h_total == 3 ** 17

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv(MAX_M_ENV_VAR, "3")
        assert max_table_m() == 3
        with pytest.raises(CapacityError):
            shape(4)
        monkeypatch.setenv(MAX_M_ENV_VAR, "bogus")
        with pytest.raises(ConfigError):
            max_table_m()


class TestLattice:
    def test_level_members_match_enumeration(self):
        for m in (1, 2, 3, 4):
            lat = Lattice(m)
            for k in range(m + 1):
                expected = [s.index for s in enumerate_level(m, k)]
                assert lat.level_members(k).tolist() == expected

    def test_level_members_bounds(self):
        lat = Lattice(3)
        with pytest.raises(LevelBoundsError):
            lat.level_members(4)

    def test_row_vertex_index(self):
        lat = Lattice(3)
        attrs = np.array([[0, 0, 0], [1, 0, 1], [1, 1, 1]], dtype=np.uint8)
        expected = [SubgroupSpec((a, b, c)).index for a, b, c in attrs]
        assert lat.row_vertex_index(attrs).tolist() == expected

    def test_main_index_is_all_stars(self):
        lat = Lattice(5)
        assert str(lat.spec(lat.main_index)) == "*****"

    @given(st.integers(1, 5), st.data())
    @settings(max_examples=40, deadline=None)
    def test_split_partitions_vertices(self, m, data):
        index = data.draw(st.integers(0, 3 ** m - 1))
        spec = SubgroupSpec.from_index(index, m)
        if spec.is_vertex:
            return
        stars = [i for i, c in enumerate(spec.codes) if c == STAR]
        pos = data.draw(st.sampled_from(stars))
        low, high = spec.split(pos)
        low_set = {str(v) for v in low.vertices()}
        high_set = {str(v) for v in high.vertices()}
        assert low_set.isdisjoint(high_set)
        assert low_set | high_set == {str(v) for v in spec.vertices()}
