from typing import Any, Dict, Literal, Optional, Tuple

from pydantic import Field, model_validator

from .types import FrozenModel

InputKind = Literal["graph", "group", "polygon", "coned_graph"]

# Parameter values that turn on seeded sampling somewhere in a step
SAMPLED_MODES = ("sampled", "auto")


class ScenarioInput(FrozenModel):
    """A named input, inline or read from a path relative to the scenario file."""
    kind: InputKind
    path: Optional[str] = None
    data: Optional[Dict[str, Any]] = None

    @model_validator(mode="after")
    def check_source(self) -> "ScenarioInput":
        if (self.path is None) == (self.data is None):
            raise ValueError("An input needs exactly one of 'path' or 'data'")
        return self


class PipelineStep(FrozenModel):
    """One operation invocation; `$name` parameter values refer to inputs or earlier steps."""
    op: str
    step_id: Optional[str] = Field(default=None, alias="id")
    params: Dict[str, Any] = Field(default_factory=dict)

    @property
    def name(self) -> str:
        return self.step_id or self.op


class Budgets(FrozenModel):
    vertices: Optional[int] = Field(default=None, gt=0)
    delta_exhaustive: Optional[int] = Field(default=None, gt=0)


class Scenario(FrozenModel):
    name: str
    description: str = ""
    inputs: Dict[str, ScenarioInput] = Field(default_factory=dict)
    pipeline: Tuple[PipelineStep, ...] = ()
    budgets: Budgets = Field(default_factory=Budgets)
    seed: Optional[int] = None
    outputs: Optional[str] = None

    @model_validator(mode="after")
    def check_pipeline(self) -> "Scenario":
        names = [step.name for step in self.pipeline]
        if len(set(names)) != len(names):
            raise ValueError(f"Step ids must be unique, got {names}")
        clash = set(names) & set(self.inputs)
        if clash:
            raise ValueError(f"Step ids {sorted(clash)} clash with input names")
        sampled = any(step.params.get("mode") in SAMPLED_MODES for step in self.pipeline)
        if sampled and self.seed is None:
            raise ValueError("A seed is required when any step uses sampled mode")
        return self


class Artifact(FrozenModel):
    path: str
    sha256: str
    size: int


class Manifest(FrozenModel):
    scenario: str
    seed: Optional[int] = None
    steps: Tuple[str, ...] = ()
    artifacts: Tuple[Artifact, ...] = ()
