"""
Tests for services/complex_dev.py
"""
import copy

import pytest

from conelab.engines import get_engine
from conelab.models.complex import PolygonOfGroups
from conelab.models.group import GroupScenario
from conelab.scenarios.complexes import TRIANGLE_OF_INVOLUTIONS
from conelab.services.complex_dev import (
    acylindricity_probe,
    alternating_family_profile,
    as_amalgam,
    build_bass_serre_ball,
    check_local_maps,
    coned_cayley_vs_development,
    development_ball,
    edge_concat_check,
    embedding_profile,
    fundamental_group,
    intersection_condition_check,
    locate_coset,
    restrict,
)
from conelab.services.metric_core import metric_of
from conelab.utils.errors import InvalidPathError, SchemaError, UnmatchedCosetError, UnsupportedPatternError


@pytest.fixture
def amalgam(triangle):
    """The sub-complex on e3 as <a, b> *_{a = c} <c, d>."""
    return as_amalgam(restrict(triangle, ["e3"]))


class TestPolygonModel:
    """Tests for the compact polygon form."""

    def test_compact_form_names_vertices(self, triangle):
        assert triangle.vertex_names == ["v1", "v2", "v3"]
        assert triangle.n_sides == 3
        assert triangle.face is not None

    def test_edge_orders_follow_first_end(self, triangle):
        """Test an edge group without explicit group takes its image orders."""
        assert triangle.edge("e3").group.orders == (2,)
        assert triangle.edge("e3").ends == ("v1", "v2")

    def test_sides_mismatch(self):
        data = copy.deepcopy(TRIANGLE_OF_INVOLUTIONS)
        data["sides"] = 4

        with pytest.raises(ValueError):
            PolygonOfGroups.model_validate(data)


class TestFundamentalGroup:
    """Tests for fundamental_group."""

    def test_triangle_pushout(self, triangle):
        """Test the triangle gives Z/2 * Z/2 * Z/2 * Z/2 on a, b, d, z."""
        fg = fundamental_group(triangle)

        assert fg.group.kind == "free_product_cyclic"
        assert fg.group.orders == (2, 2, 2, 2)
        assert get_engine(fg.group).generators == ("a", "b", "d", "z")
        assert fg.identification == {"c": "a", "x": "b", "y": "d"}

    def test_triangle_local_images(self, triangle):
        fg = fundamental_group(triangle)

        assert fg.edge_subgroups["e1"].generators == ("d",)
        assert fg.edge_subgroups["e2"].generators == ("b",)
        assert fg.edge_subgroups["e3"].generators == ("a",)
        assert fg.vertex_subgroups["v3"].generators == ("b", "d", "z")
        assert fg.face_subgroup.generators == ()

    def test_semidirect_pushout(self, semidirect_triangle):
        """Test the semidirect vertex group keeps its names and is amalgamated with <d>."""
        fg = fundamental_group(semidirect_triangle)

        assert fg.group.kind == "amalgam"
        assert fg.group.left.kind == "semidirect_z_free"
        assert fg.group.right.free_generators == ("d",)
        assert fg.identification == {"a": "z", "b": "x", "c": "d", "e": "y"}

    def test_word_images_unsupported(self):
        data = copy.deepcopy(TRIANGLE_OF_INVOLUTIONS)
        data["edge_maps"]["e3"]["into_v1"] = {"t3": "a b"}

        with pytest.raises(UnsupportedPatternError):
            fundamental_group(PolygonOfGroups.model_validate(data))


class TestLocalConditions:
    """Tests for check_local_maps and intersection_condition_check."""

    def test_triangle_local_maps_injective(self, triangle):
        checks = check_local_maps(triangle, radius=3)

        assert len(checks) == 6
        assert all(check.injective for check in checks)

    def test_semidirect_local_maps_injective(self, semidirect_triangle):
        checks = check_local_maps(semidirect_triangle, radius=2)

        assert len(checks) == 6
        assert all(check.injective for check in checks)

    def test_intersection_condition_holds(self, triangle):
        rows = intersection_condition_check(triangle, radius=3)

        assert [row.vertex for row in rows] == ["v1", "v2", "v3"]
        assert all(row.holds for row in rows)
        assert rows[0].edges == ("e2", "e3")

    def test_intersection_condition_needs_face(self, triangle):
        with pytest.raises(SchemaError):
            intersection_condition_check(restrict(triangle, ["e3"]))


class TestDevelopment:
    """Tests for development_ball and build_bass_serre_ball."""

    def test_base_face(self, triangle):
        """Test the identity cosets come first and span the first face."""
        ball = development_ball(triangle, radius=2)

        assert [locate_coset(ball, label, "1") for label in ("v1", "v2", "v3")] == [0, 1, 2]
        assert ball.faces[0] == (0, 1, 2)
        assert not ball.is_tree
        assert not ball.exact_metric

    def test_locate_outside_ball(self, triangle):
        ball = development_ball(triangle, radius=1)

        with pytest.raises(UnmatchedCosetError):
            locate_coset(ball, "v2", "d b d b")

    def test_locate_unknown_label(self, triangle):
        ball = development_ball(triangle, radius=1)

        with pytest.raises(UnmatchedCosetError):
            locate_coset(ball, "v9", "1")

    def test_restrict_and_amalgam(self, triangle, amalgam):
        assert restrict(triangle, ["e3"]).vertex_names == ["v1", "v2"]
        assert amalgam.kind == "amalgam"
        assert amalgam.identifications == (("a", "c"),)

    def test_bass_serre_ball_is_tree(self, amalgam):
        ball = build_bass_serre_ball(amalgam, radius=4)

        assert ball.is_tree
        assert ball.exact_metric
        assert len(ball.skeleton.edges) == ball.skeleton.vertex_count - 1

    def test_bass_serre_needs_amalgam(self, z2_z3):
        with pytest.raises(SchemaError):
            build_bass_serre_ball(z2_z3, radius=2)

    def test_bass_serre_distance_of_blocks(self, amalgam):
        """Test (db)^n G_v2 lies 2n + 1 from G_v1 in the tree."""
        ball = build_bass_serre_ball(amalgam, radius=6)
        metric = metric_of(ball.skeleton)
        base = locate_coset(ball, "v1", "1")

        for n in (1, 2, 3):
            assert metric.d(base, locate_coset(ball, "v2", " ".join(["d b"] * n))) == 2 * n + 1


class TestComparisons:
    """Tests for the tree/development comparisons."""

    def test_alternating_family(self, triangle):
        """Test the tree distance grows while the development distance stays at 2."""
        profile = alternating_family_profile(triangle, ["e3"], n_max=3, radius=6)
        blocks = [row for row in profile.rows if row.reading == "blocks"]
        letters = [row for row in profile.rows if row.reading == "letters"]

        assert [row.d_tree for row in blocks] == [3, 5, 7]
        assert [row.d_development for row in blocks] == [2, 2, 2]
        assert [row.d_tree for row in letters] == [1, 3, 3]
        assert letters[0].d_development == 1
        assert profile.matching_readings == ()

    def test_alternating_family_radius_check(self, triangle):
        with pytest.raises(SchemaError):
            alternating_family_profile(triangle, ["e3"], n_max=3, radius=4)

    def test_alternating_family_single_edge(self, triangle):
        with pytest.raises(SchemaError):
            alternating_family_profile(triangle, ["e2", "e3"], n_max=1)

    def test_embedding_is_not_proper(self, triangle, amalgam):
        """Test far tree cosets land at development distance 2."""
        tree = build_bass_serre_ball(amalgam, radius=6)
        development = development_ball(triangle, radius=6)
        profile = embedding_profile(tree, development, samples=200, seed=1)

        assert profile.properness.non_proper
        assert dict(profile.properness.table)[2] >= 5
        assert all(row.d_target <= row.d_source for row in profile.rows)

    def test_coned_cayley_vs_development(self, triangle):
        comparison = coned_cayley_vs_development(triangle, radius=3, annulus=1)

        assert comparison.clear_vertices > 0
        assert comparison.params.lam >= 1

    def test_edge_concat_check(self, triangle):
        """Test two sides of the base face shortcut through the third."""
        ball = development_ball(triangle, radius=2)
        verdicts = edge_concat_check(ball, [(1, 0, 2), (1, 0, 1)])

        assert verdicts[0].verdict == "shortcut"
        assert verdicts[0].distance == 1
        assert 0 in verdicts[0].faces_first
        assert verdicts[1].verdict == "not applicable"

    def test_edge_concat_needs_two_edges(self, triangle):
        ball = development_ball(triangle, radius=2)

        with pytest.raises(InvalidPathError):
            edge_concat_check(ball, [(0, 0, 1)])

    def test_acylindricity_threshold(self, triangle):
        ball = development_ball(triangle, radius=2)

        with pytest.raises(SchemaError):
            acylindricity_probe(ball, threshold=0)

    def test_acylindricity_probe_on_tree(self, amalgam):
        probe = acylindricity_probe(build_bass_serre_ball(amalgam, radius=4), threshold=2, max_pairs=20)

        assert len(probe.rows) <= 20
        assert all(row.distance >= 2 for row in probe.rows)
        assert probe.label == "finite-scale evidence"


def test_group_scenario_roundtrip_of_pushout(triangle):
    """The pushout scenario survives a JSON dump and reload."""
    fg = fundamental_group(triangle)
    reloaded = GroupScenario.model_validate(fg.group.model_dump(mode="json", by_alias=True))

    assert get_engine(reloaded).generators == ("a", "b", "d", "z")
