"""
Tests for services/electrify.py
"""

import pytest
from hypothesis import given, settings as hypothesis_settings

from conelab.services.electrify import (
    attach_horoballs,
    compare_cone_offs,
    cone_off,
    de_electrification_profile,
    de_electrify,
    electric_divergence_profile,
    electric_path,
    fellow_travel_stats,
    local_finiteness_profile,
    normalize_sets,
    sample_pairs,
)
from conelab.services.metric_core import distance, validate
from conelab.utils.errors import EmptySetError, InvalidPathError, MembershipError, SchemaError, UnknownVertexError
from tests.conftest import path_graph
from tests.strategies import connected_graphs


@pytest.fixture
def coned_path(path5):
    """Path 0..4 with its endpoints coned."""
    return cone_off(path5, {"ends": [0, 4]})


class TestConeOff:
    """Tests for cone_off and normalize_sets."""

    def test_cone_vertex_ids_follow_base(self, coned_path):
        """Test the cone vertex gets the first id after the base vertices."""
        assert coned_path.cone_vertices == {"ends": 5}
        assert coned_path.extended.vertex_count == 6
        assert coned_path.extended.labels[5] == "cone:ends"

    def test_coned_set_has_diameter_two(self, coned_path):
        assert distance(coned_path.extended, 0, 4) == 2

    def test_metadata(self, coned_path):
        """Test base delta, k0 and lambda0 recorded on the cone-off."""
        metadata = coned_path.metadata

        assert metadata.delta.value == 0
        assert metadata.k0 == 2
        assert metadata.lambda0 == 4
        assert metadata.calibration_pairs == 10

    def test_measure_false_skips_metadata(self, path5):
        assert cone_off(path5, [[0, 4]], measure=False).metadata is None

    def test_list_sets_get_positional_ids(self, path5):
        coned = cone_off(path5, [[0, 1], [3]], measure=False)

        assert coned.cone_vertices == {"A0": 5, "A1": 6}

    def test_empty_set_rejected(self, path5):
        with pytest.raises(EmptySetError):
            normalize_sets(path5, {"a": []})

    def test_unknown_member_rejected(self, path5):
        with pytest.raises(UnknownVertexError):
            normalize_sets(path5, [[0, 7]])

    @hypothesis_settings(max_examples=30, deadline=None)
    @given(connected_graphs())
    def test_cone_off_never_stretches(self, g):
        """Test extended distances never exceed base distances and stay connected."""
        coned = cone_off(g, [[0, g.vertex_count - 1]], measure=False)

        assert validate(coned.extended).connected
        for u in range(g.vertex_count):
            for v in range(g.vertex_count):
                assert distance(coned.extended, u, v) <= distance(g, u, v)


class TestElectricPaths:
    """Tests for electric_path and de_electrify."""

    def test_electric_path(self, coned_path):
        path = electric_path(coned_path, "ends", 0, 4)

        assert path.vertices == (0, 5, 4)
        assert path.length == 2

    def test_electric_path_membership(self, coned_path):
        with pytest.raises(MembershipError):
            electric_path(coned_path, "ends", 0, 2)

    def test_electric_path_unknown_set(self, coned_path):
        with pytest.raises(SchemaError):
            electric_path(coned_path, "middle", 0, 4)

    def test_de_electrify_projects_onto_set(self, coned_path):
        """Test the cone visit becomes the projected base geodesic."""
        dotted = de_electrify(coned_path, [0, 5, 4])

        assert dotted.vertices == (0, 0, 0, 4, 4)
        assert dotted.step_bound == 4

    def test_de_electrify_keeps_base_path(self, coned_path):
        dotted = de_electrify(coned_path, [1, 2, 3])

        assert dotted.vertices == (1, 2, 3)
        assert dotted.step_bound == 1

    def test_de_electrify_rejects_cone_endpoint(self, coned_path):
        with pytest.raises(InvalidPathError):
            de_electrify(coned_path, [0, 5])

    def test_de_electrify_rejects_non_walk(self, coned_path):
        with pytest.raises(InvalidPathError):
            de_electrify(coned_path, [0, 2])


class TestMeasurements:
    """Tests for the profiles built on a cone-off."""

    def test_fellow_travel_stats(self, coned_path):
        """Test the base and extended geodesics between the coned ends stay 2 apart."""
        rows = fellow_travel_stats(coned_path, pairs=[(0, 4)])

        assert len(rows) == 1
        assert rows[0].d_base == 4
        assert rows[0].d_extended == 2
        assert rows[0].hausdorff == 2

    def test_fellow_travel_all_pairs(self, coned_path):
        assert len(fellow_travel_stats(coned_path)) == 10

    def test_compare_identical_families(self, path5):
        """Test identical families give the identity quasi-isometry."""
        comparison = compare_cone_offs(path5, {"e": [0, 4]}, {"e": [0, 4]})

        assert comparison.hausdorff_bound == 0
        assert comparison.params.lam == 1
        assert comparison.params.eps == 0

    def test_compare_nearby_families(self, path5):
        """Test moving a set by one step keeps the Hausdorff bound at 1."""
        comparison = compare_cone_offs(path5, {"e": [0, 4]}, {"e": [1, 4]})

        assert comparison.hausdorff_bound == 1

    def test_compare_needs_matching_ids(self, path5):
        with pytest.raises(SchemaError):
            compare_cone_offs(path5, {"a": [0]}, {"b": [0]})

    def test_attach_horoballs_counts(self):
        """Test two layers over the whole path 0..3."""
        cusped = attach_horoballs(path_graph(4), {"all": [0, 1, 2, 3]}, depth=2)

        assert cusped.vertex_count == 12
        assert len(cusped.edges) == 22
        assert cusped.metadata["layers"] == "2"

    def test_attach_horoballs_depth(self, path5):
        with pytest.raises(SchemaError):
            attach_horoballs(path5, [[0]], depth=0)

    def test_local_finiteness_profile(self):
        """Test the number of sets met grows with the radius."""
        rows = local_finiteness_profile(path_graph(10), [[0], [5], [9]], center=0, radii=[0, 5, 9])

        assert [row.sets_met for row in rows] == [1, 2, 3]

    def test_electric_divergence_has_no_violations(self, coned_path):
        rows, violations = electric_divergence_profile(coned_path, max_distance=2, samples=50, seed=1)

        assert violations == []
        assert [row.extended_distance for row in rows] == [0, 1, 2]
        assert rows[0].triples == 50

    def test_de_electrification_profile(self, coned_path):
        """Test rows are cumulative in the extended length."""
        rows = de_electrification_profile(coned_path, max_length=3)

        assert [row.length for row in rows] == [0, 1, 2, 3]
        assert [row.paths for row in rows] == [0, 4, 8, 10]
        assert rows[-1].max_constant >= rows[1].max_constant

    def test_sample_pairs_enumerates_small_graphs(self):
        assert sample_pairs(4, 100, seed=0) == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]

    def test_sample_pairs_respects_limit(self):
        pairs = sample_pairs(50, 20, seed=4)

        assert len(pairs) == 20
        assert pairs == sample_pairs(50, 20, seed=4)
        assert all(u < v for u, v in pairs)
        assert isinstance(pairs[0][0], int)
