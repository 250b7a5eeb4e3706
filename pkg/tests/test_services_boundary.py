"""
Tests for services/boundary.py
"""
from fractions import Fraction

import pytest

from conelab.services.boundary import (
    classify_ray,
    coned_mitra_profile,
    ct_consistency_probe,
    divergence_profile,
    exchange_condition_probe,
    limit_projection_growth,
    mitra_profile,
)
from conelab.services.electrify import cone_off
from conelab.utils.errors import EmptySetError, InvalidMapError, InvalidPathError, MembershipError
from tests.conftest import path_graph

ROOT_TO_LEAF = [0, 1, 3, 7]


@pytest.fixture
def path10():
    return path_graph(10)


@pytest.fixture
def fully_coned(path10):
    """Path 0..9 coned along all of its vertices."""
    return cone_off(path10, [list(range(10))], measure=False)


class TestDivergence:
    """Tests for divergence_profile and limit_projection_growth."""

    def test_ray_diverges(self, path10):
        """Test (x_m.x_n)_0 = min(m, n) along a geodesic ray."""
        profile = divergence_profile(path10, list(range(10)), basepoint=0)

        assert profile.tail_infimum == tuple(Fraction(k) for k in range(10))
        assert profile.verdict == "diverging"
        assert len(profile.table) == 55

    def test_constant_sequence_stalls(self, path10):
        profile = divergence_profile(path10, [3, 3, 3, 3], basepoint=0)

        assert profile.tail_infimum == (3, 3, 3, 3)
        assert profile.verdict == "stalled"

    def test_empty_sequence(self, path10):
        with pytest.raises(EmptySetError):
            divergence_profile(path10, [], basepoint=0)

    def test_limit_projection_growth(self, path5):
        """Test the projection jumps from 0 to 4 once the ray passes the midpoint."""
        table = limit_projection_growth(path5, [0, 4], [0, 1, 2, 3, 4])

        assert table == [(0, 0), (1, 0), (2, 0), (3, 4), (4, 4)]

    def test_limit_projection_empty_set(self, path5):
        with pytest.raises(EmptySetError):
            limit_projection_growth(path5, [], [0, 1])


class TestClassifyRay:
    """Tests for classify_ray."""

    def test_vertical_ray(self, fully_coned):
        """Test a ray inside a coned set is vertical for that set."""
        ray = classify_ray(fully_coned, list(range(10)))

        assert ray.kind == "vertical"
        assert ray.set_id == "A0"
        assert ray.window == 3
        assert ray.extended_diameter == 2

    def test_short_prefix_undetermined_by_default(self, fully_coned):
        """Test the default window follows the radius, not the prefix length."""
        ray = classify_ray(fully_coned, [0, 1, 2, 3])

        assert ray.window == 3
        assert ray.projection_diameters["A0"] == 3
        assert ray.kind == "undetermined"

    def test_explicit_radius(self, fully_coned):
        ray = classify_ray(fully_coned, [0, 1, 2, 3], radius=Fraction(6))

        assert ray.window == 2
        assert ray.kind == "vertical"

    def test_horizontal_ray(self, path10):
        coned = cone_off(path10, [[0]], measure=False)
        ray = classify_ray(coned, list(range(10)))

        assert ray.kind == "horizontal"
        assert ray.set_id is None

    def test_undetermined_single_vertex(self, path10):
        coned = cone_off(path10, [[0]], measure=False)

        assert classify_ray(coned, [5]).kind == "undetermined"

    def test_ray_leaving_base(self, fully_coned):
        with pytest.raises(InvalidPathError):
            classify_ray(fully_coned, [0, 10])


class TestMitraProfile:
    """Tests for mitra_profile and coned_mitra_profile."""

    def test_identity_on_tree(self, tree15):
        """Test the identity of a tree gives M(N) = N."""
        profile = mitra_profile(tree15, tree15, list(range(15)), 0)

        assert profile.table == ((0, 0), (1, 1), (2, 2), (3, 3))
        assert profile.exhaustive
        assert profile.seed is None
        assert profile.pair_count == 15 * 16 // 2

    def test_geodesic_into_tree(self, tree15):
        """Test an isometric root-to-leaf path keeps M(N) = N."""
        profile = mitra_profile(path_graph(4), tree15, ROOT_TO_LEAF, 0)

        assert profile.table == ((0, 0), (1, 1), (2, 2), (3, 3))

    def test_n_max_truncates(self, tree15):
        profile = mitra_profile(tree15, tree15, list(range(15)), 0, n_max=1)

        assert profile.table == ((0, 0), (1, 1))

    def test_non_injective_map(self, tree15):
        with pytest.raises(InvalidMapError):
            mitra_profile(path_graph(4), tree15, [0, 1, 1, 3], 0)

    def test_stretching_map(self, tree15):
        with pytest.raises(InvalidMapError):
            mitra_profile(path_graph(4), tree15, [0, 1, 3, 2], 0)

    def test_wrong_length_map(self, tree15):
        with pytest.raises(InvalidMapError):
            mitra_profile(path_graph(4), tree15, [0, 1, 3], 0)

    def test_coned_pair(self, tree15):
        """Test cones map to the cone over the first containing set."""
        profile = coned_mitra_profile(path_graph(4), tree15, ROOT_TO_LEAF, [[0, 1]], [[0, 1, 2]], 0)

        assert profile.table[0] == (0, 0)
        assert profile.exhaustive

    def test_coned_pair_needs_containing_set(self, tree15):
        with pytest.raises(MembershipError):
            coned_mitra_profile(path_graph(4), tree15, ROOT_TO_LEAF, [[0, 1]], [[2]], 0)


class TestConsistencyProbes:
    """Tests for ct_consistency_probe and exchange_condition_probe."""

    def test_identity_is_consistent(self, path10):
        ray = list(range(10))
        probe = ct_consistency_probe(path10, path10, ray, [(ray, ray)], 0)

        assert probe.rows[0].verdict == "consistent"
        assert not probe.rows[0].asymmetric

    def test_coned_target_stalls(self, path10, fully_coned):
        """Test a diverging ray whose image has bounded products."""
        ray = list(range(10))
        probe = ct_consistency_probe(path10, fully_coned.extended, ray, [(ray, ray)], 0)

        assert probe.rows[0].verdict == "stalled"
        assert probe.rows[0].asymmetric
        assert probe.rows[0].x_curve[-1] == 2

    def test_stalled_source_is_inconclusive(self, path10):
        probe = ct_consistency_probe(path10, path10, list(range(10)), [([3, 3, 3], [3, 3, 3])], 0)

        assert probe.rows[0].verdict == "inconclusive"

    def test_exchange_condition_vertical(self, fully_coned):
        ray = list(range(10))
        probe = exchange_condition_probe(fully_coned, fully_coned, ray, [ray])

        assert probe.rows[0].in_x.kind == "vertical"
        assert probe.rows[0].holds is True

    def test_exchange_condition_horizontal(self, path10):
        coned = cone_off(path10, [[0]], measure=False)
        ray = list(range(10))
        probe = exchange_condition_probe(coned, coned, ray, [ray])

        assert probe.rows[0].in_x.kind == "horizontal"
        assert probe.rows[0].holds is None
