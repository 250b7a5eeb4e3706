"""
Tests for models/scenario.py
"""
import pytest
from pydantic import ValidationError

from conelab.models.scenario import Budgets, PipelineStep, Scenario, ScenarioInput
from conelab.scenarios.catalog import BUNDLED_SCENARIOS


class TestScenarioInput:
    """Tests for ScenarioInput."""

    def test_inline_input(self):
        spec = ScenarioInput(kind="graph", data={"vertices": 1})

        assert spec.path is None

    def test_needs_exactly_one_source(self):
        with pytest.raises(ValidationError):
            ScenarioInput(kind="graph")
        with pytest.raises(ValidationError):
            ScenarioInput(kind="graph", path="g.json", data={"vertices": 1})

    def test_unknown_kind(self):
        with pytest.raises(ValidationError):
            ScenarioInput(kind="matrix", path="m.json")


class TestScenario:
    """Tests for Scenario validation."""

    def test_step_name_defaults_to_op(self):
        step = PipelineStep.model_validate({"op": "validate"})

        assert step.name == "validate"
        assert PipelineStep.model_validate({"op": "validate", "id": "check"}).name == "check"

    def test_valid_scenario(self, path_scenario):
        scenario = Scenario.model_validate(path_scenario)

        assert [step.name for step in scenario.pipeline] == ["validate", "delta_four_point", "coned", "fellow_travel_stats"]
        assert scenario.seed == 11

    def test_duplicate_step_ids(self):
        with pytest.raises(ValidationError):
            Scenario.model_validate({"name": "dup", "pipeline": [{"op": "validate"}, {"op": "validate"}]})

    def test_step_id_clashing_with_input(self, path_scenario):
        path_scenario["pipeline"][0]["id"] = "path"

        with pytest.raises(ValidationError):
            Scenario.model_validate(path_scenario)

    def test_sampled_mode_requires_seed(self, path_scenario):
        """Test a sampled step without a scenario seed is rejected."""
        path_scenario["pipeline"][1]["params"]["mode"] = "sampled"
        del path_scenario["seed"]

        with pytest.raises(ValidationError):
            Scenario.model_validate(path_scenario)

    def test_budgets_must_be_positive(self):
        with pytest.raises(ValidationError):
            Budgets(vertices=0)

    @pytest.mark.parametrize("name", sorted(BUNDLED_SCENARIOS))
    def test_bundled_scenarios_validate(self, name):
        scenario = Scenario.model_validate(BUNDLED_SCENARIOS[name])

        assert scenario.name == name
        assert scenario.pipeline
