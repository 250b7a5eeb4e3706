"""
Tests for services/pipeline.py
"""
import json

import pytest

from conelab.models.scenario import Scenario
from conelab.scenarios.contracts import OPERATION_CONTRACTS, describe_operation
from conelab.services.pipeline import StepRegistry, load_scenario, random_tree, run_scenario
from conelab.services.metric_core import validate
from conelab.utils.errors import BudgetExceededError, SchemaError, UnknownOperationError

POINT_OPERATIONS = [
    "distance",
    "geodesic",
    "interval",
    "gromov_product",
    "hausdorff_distance",
    "nearest_point_projection",
    "electric_path",
    "de_electrify",
    "normal_form",
    "subgroup_membership",
]

PATH_ARTIFACTS = [
    "00_validate.json",
    "01_delta_four_point.json",
    "02_coned.json",
    "03_fellow_travel_stats.csv",
    "03_fellow_travel_stats.json",
]


def _scenario(pipeline, **extra):
    return Scenario.model_validate({"name": "adhoc", "pipeline": pipeline, **extra})


class TestStepRegistry:
    """Tests for StepRegistry."""

    def test_unknown_operation(self):
        with pytest.raises(UnknownOperationError):
            StepRegistry.get("frobnicate")

    def test_every_operation_has_a_contract(self):
        assert sorted(OPERATION_CONTRACTS) == StepRegistry.list_ops()

    def test_describe_operation(self):
        text = describe_operation("delta_four_point")

        assert text.splitlines()[0] == "delta_four_point"
        assert "errors:" in text


class TestRunScenario:
    """Tests for run_scenario."""

    def test_artifacts_and_manifest(self, tmp_path, path_scenario):
        manifest = run_scenario(Scenario.model_validate(path_scenario), tmp_path)

        assert [a.path for a in manifest.artifacts] == PATH_ARTIFACTS
        assert manifest.seed == 11
        assert manifest.steps == ("validate", "delta_four_point", "coned", "fellow_travel_stats")
        assert (tmp_path / "manifest.json").is_file()

    def test_step_documents(self, tmp_path, path_scenario):
        run_scenario(Scenario.model_validate(path_scenario), tmp_path)
        delta = json.loads((tmp_path / "01_delta_four_point.json").read_text(encoding="utf-8"))
        coned = json.loads((tmp_path / "02_coned.json").read_text(encoding="utf-8"))
        rows = (tmp_path / "03_fellow_travel_stats.csv").read_text(encoding="utf-8").splitlines()

        assert delta["op"] == "delta_four_point"
        assert delta["result"]["value"] == "0"
        assert coned["result"]["coned"]["cones"] == [{"id": "ends", "members": [0, 4]}]
        assert coned["result"]["extended"]["vertices"] == 6
        assert rows[0] == "u,v,d_base,d_extended,hausdorff"
        assert len(rows) == 11

    def test_reruns_are_byte_identical(self, tmp_path, path_scenario):
        """Test identical inputs and seed give identical files."""
        scenario = Scenario.model_validate(path_scenario)
        first = run_scenario(scenario, tmp_path / "a")
        second = run_scenario(scenario, tmp_path / "b")

        assert first == second
        assert (tmp_path / "a" / "manifest.json").read_bytes() == (tmp_path / "b" / "manifest.json").read_bytes()

    def test_seed_override(self, tmp_path, path_scenario):
        manifest = run_scenario(Scenario.model_validate(path_scenario), tmp_path, seed=3)

        assert manifest.seed == 3

    def test_unknown_operation_in_pipeline(self, tmp_path):
        with pytest.raises(UnknownOperationError):
            run_scenario(_scenario([{"op": "frobnicate"}]), tmp_path)

    def test_dangling_reference(self, tmp_path):
        with pytest.raises(SchemaError):
            run_scenario(_scenario([{"op": "validate", "params": {"graph": "$missing"}}]), tmp_path)

    def test_missing_input_file(self, tmp_path):
        scenario = _scenario([], inputs={"g": {"kind": "graph", "path": "absent.json"}})

        with pytest.raises(SchemaError):
            run_scenario(scenario, tmp_path / "out", base_dir=tmp_path)

    def test_input_path_relative_to_base_dir(self, tmp_path):
        (tmp_path / "g.json").write_text(json.dumps({"vertices": 2, "edges": [[0, 1]]}), encoding="utf-8")
        scenario = _scenario(
            [{"op": "validate", "params": {"graph": "$g"}}],
            inputs={"g": {"kind": "graph", "path": "g.json"}},
        )
        run_scenario(scenario, tmp_path / "out", base_dir=tmp_path)
        report = json.loads((tmp_path / "out" / "00_validate.json").read_text(encoding="utf-8"))

        assert report["result"]["connected"] is True

    def test_vertex_budget_override(self, tmp_path, path_scenario):
        with pytest.raises(BudgetExceededError):
            run_scenario(Scenario.model_validate(path_scenario), tmp_path, budget_vertices=3)

    def test_failing_step_stops_the_run(self, tmp_path, path_scenario):
        """Test nothing after the failing step is written."""
        path_scenario["pipeline"][1]["params"]["graph"] = "$missing"

        with pytest.raises(SchemaError):
            run_scenario(Scenario.model_validate(path_scenario), tmp_path)

        assert (tmp_path / "00_validate.json").is_file()
        assert not (tmp_path / "02_coned.json").exists()
        assert not (tmp_path / "manifest.json").exists()


class TestExperimentSteps:
    """Tests for the family steps that generate their own graphs."""

    def test_random_tree_is_seeded(self):
        tree = random_tree(12, seed=4)

        assert tree == random_tree(12, seed=4)
        assert len(tree.edges) == 11
        assert validate(tree).connected

    def test_tree_cone_family(self, tmp_path):
        scenario = _scenario(
            [{"op": "tree_cone_family", "params": {"sizes": [8, 10], "instances": 2, "cones": 2, "cone_radius": 1, "mode": "exhaustive"}}],
            seed=5,
        )
        run_scenario(scenario, tmp_path)
        summary = json.loads((tmp_path / "00_tree_cone_family.json").read_text(encoding="utf-8"))
        rows = (tmp_path / "00_tree_cone_family.csv").read_text(encoding="utf-8").splitlines()

        assert summary["result"]["instances"] == 4
        assert len(rows) == 5
        assert all(row.split(",")[4] == "exhaustive" for row in rows[1:])

    def test_cycle_fellow_travel(self, tmp_path):
        run_scenario(_scenario([{"op": "cycle_fellow_travel", "params": {"n_min": 3, "n_max": 5}}]), tmp_path)
        rows = (tmp_path / "00_cycle_fellow_travel.csv").read_text(encoding="utf-8").splitlines()

        assert rows[0] == "cycle_length,max_hausdorff"
        assert [row.split(",")[0] for row in rows[1:]] == ["6", "8", "10"]

    def test_group_steps_chain(self, tmp_path):
        """Test a Cayley ball feeds a graph step by reference."""
        scenario = _scenario(
            [
                {"op": "cayley_ball", "id": "ball", "params": {"group": "$g", "radius": 2}},
                {"op": "delta_four_point", "params": {"graph": "$ball"}},
            ],
            inputs={"g": {"kind": "group", "data": {"kind": "free_group", "rank": 2}}},
        )
        manifest = run_scenario(scenario, tmp_path)
        registry = (tmp_path / "00_ball_registry.csv").read_text(encoding="utf-8").splitlines()
        delta = json.loads((tmp_path / "01_delta_four_point.json").read_text(encoding="utf-8"))

        assert "00_ball_registry.csv" in [a.path for a in manifest.artifacts]
        assert registry[:2] == ["vertex_id,normal_form", "0,1"]
        assert len(registry) == 18
        assert delta["result"]["value"] == "0"


class TestPointSteps:
    """Tests for the single-value metric, electric and word steps."""

    @staticmethod
    def _result(out, name):
        return json.loads((out / f"{name}.json").read_text(encoding="utf-8"))["result"]

    def test_point_operations_are_registered(self):
        for op in POINT_OPERATIONS:
            assert op in OPERATION_CONTRACTS
            assert op in StepRegistry.list_ops()

    def test_metric_steps_chain(self, tmp_path):
        scenario = _scenario(
            [
                {"op": "geodesic", "id": "geo", "params": {"graph": "$path", "u": 0, "v": 4}},
                {"op": "distance", "params": {"graph": "$path", "u": 1, "v": 3}},
                {"op": "interval", "id": "between", "params": {"graph": "$path", "u": 1, "v": 3}},
                {"op": "gromov_product", "params": {"graph": "$path", "base": 0, "a": 2, "b": 4}},
                {"op": "hausdorff_distance", "params": {"graph": "$path", "first": "$between", "second": [0]}},
                {"op": "nearest_point_projection", "params": {"graph": "$path", "members": "$geo", "x": 2}},
            ],
            inputs={"path": {"kind": "graph", "data": {"vertices": 5, "edges": [[0, 1], [1, 2], [2, 3], [3, 4]]}}},
        )
        run_scenario(scenario, tmp_path)

        assert self._result(tmp_path, "00_geo") == {"vertices": [0, 1, 2, 3, 4], "total_length": "4"}
        assert self._result(tmp_path, "01_distance")["distance"] == "2"
        assert self._result(tmp_path, "02_between") == {"members": [1, 2, 3], "size": 3}
        assert self._result(tmp_path, "03_gromov_product") == {"gromov_product": "2"}
        assert self._result(tmp_path, "04_hausdorff_distance") == {"hausdorff": "3"}
        assert self._result(tmp_path, "05_nearest_point_projection")["projection"] == 2

    def test_electric_path_feeds_de_electrify(self, tmp_path, path_scenario):
        """Test an electric hop across the coned ends becomes the projected base geodesic."""
        path_scenario["pipeline"] = [
            {"op": "cone_off", "id": "coned", "params": {"graph": "$path", "sets": {"ends": [0, 4]}, "measure": False}},
            {"op": "electric_path", "id": "hop", "params": {"coned": "$coned", "set_id": "ends", "x": 0, "x_prime": 4}},
            {"op": "de_electrify", "params": {"coned": "$coned", "path": "$hop"}},
        ]
        run_scenario(Scenario.model_validate(path_scenario), tmp_path)

        assert self._result(tmp_path, "01_hop")["vertices"] == [0, 5, 4]
        assert self._result(tmp_path, "02_de_electrify") == {"vertices": [0, 0, 0, 4, 4], "step_bound": "4"}

    def test_word_steps(self, tmp_path):
        scenario = _scenario(
            [
                {"op": "normal_form", "params": {"group": "$g", "word": "x x^-1 y"}},
                {"op": "subgroup_membership", "id": "inside", "params": {"group": "$g", "subgroup": ["x"], "word": "x x"}},
                {"op": "subgroup_membership", "id": "outside", "params": {"group": "$g", "subgroup": ["x"], "word": "x y x^-1"}},
            ],
            inputs={"g": {"kind": "group", "data": {"kind": "free_group", "rank": 2}}},
        )
        run_scenario(scenario, tmp_path)

        assert self._result(tmp_path, "00_normal_form") == {"normal_form": "y", "length": 1}
        assert self._result(tmp_path, "01_inside")["member"] is True
        assert self._result(tmp_path, "02_outside")["member"] is False


class TestLoadScenario:
    """Tests for load_scenario."""

    def test_bundled_name(self):
        scenario, _ = load_scenario("semidirect-distortion")

        assert scenario.name == "semidirect-distortion"

    def test_file_resolves_against_its_directory(self, tmp_path, path_scenario):
        target = tmp_path / "s.json"
        target.write_text(json.dumps(path_scenario), encoding="utf-8")
        scenario, base_dir = load_scenario(str(target))

        assert scenario.name == "path-cone"
        assert base_dir == tmp_path

    def test_unknown_name(self, tmp_path):
        with pytest.raises(SchemaError):
            load_scenario(str(tmp_path / "no-such-scenario.json"))

    def test_alias_resolves_to_bundled_scenario(self):
        scenario, _ = load_scenario("example-5-8-distortion")

        assert scenario.name == "semidirect-distortion"


class TestBundledRuns:
    """End-to-end runs of bundled scenarios."""

    def test_mitra_comparison_runs(self, tmp_path):
        """Test the bundled Mitra comparison runs and the identity profile is M(N) = N."""
        scenario, base_dir = load_scenario("mitra-isometric-vs-non-proper")
        manifest = run_scenario(scenario, tmp_path, base_dir=base_dir)
        identity = (tmp_path / "00_identity.csv").read_text(encoding="utf-8").splitlines()
        subtree = (tmp_path / "01_subtree.csv").read_text(encoding="utf-8").splitlines()

        assert manifest.steps == ("identity", "subtree", "tree_ball", "development", "triangle")
        assert identity == ["N,M", "0,0", "1,1", "2,2", "3,3"]
        assert subtree[0] == "N,M"
        assert all(row.split(",")[0] == row.split(",")[1] for row in subtree[1:])
        assert (tmp_path / "04_triangle.csv").is_file()
        assert all((tmp_path / artifact.path).is_file() for artifact in manifest.artifacts)
