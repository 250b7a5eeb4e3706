"""
JSON interchange for graphs, group scenarios, polygons of groups and reports.

Every document is written with sorted keys, two-space indentation and a
trailing newline so that identical inputs give byte-identical files.
"""
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Type, TypeVar, Union

from pydantic import BaseModel, ValidationError

from conelab.models.complex import PolygonOfGroups
from conelab.models.electric import ConedGraph
from conelab.models.graph import MetricGraph
from conelab.models.group import GroupScenario
from conelab.services.electrify import cone_off
from conelab.utils.errors import SchemaError
from conelab.utils.rational import format_rational

ModelT = TypeVar("ModelT", bound=BaseModel)

PathLike = Union[str, Path]


def to_jsonable(value: Any) -> Any:
    """
    Plain JSON data for a model, a list of models or plain data.

    Models dump with their aliases, so a dumped MetricGraph reads back as
    {"vertices": N, "edges": [[u, v, "p/q"], ...], ...}.
    """
    if isinstance(value, BaseModel):
        return value.model_dump(mode="json", by_alias=True)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, Fraction):
        return format_rational(value)
    return value


def dumps_canonical(value: Any) -> str:
    """Deterministic JSON text of any model or plain structure."""
    return json.dumps(to_jsonable(value), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(path: PathLike, value: Any) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(dumps_canonical(value), encoding="utf-8")
    return target


def read_document(path: PathLike) -> Dict[str, Any]:
    """
    Read a JSON object from disk.

    Raises:
        SchemaError: If the file is missing or is not a JSON object
    """
    source = Path(path)
    if not source.is_file():
        raise SchemaError(f"Input file not found: {source}")
    try:
        data = json.loads(source.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise SchemaError(f"{source} is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise SchemaError(f"{source} must hold a JSON object")
    return data


def parse_model(model: Type[ModelT], data: Any, what: str = "") -> ModelT:
    """
    Validate data against a model, reporting failures as schema violations.

    Raises:
        SchemaError: On any validation error
    """
    if isinstance(data, model):
        return data
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise SchemaError(f"Invalid {what or model.__name__}: {e}") from e


def load_model(model: Type[ModelT], source: Union[PathLike, Dict[str, Any], ModelT]) -> ModelT:
    """Model from a path, an inline dict or an instance."""
    if isinstance(source, (str, Path)):
        return parse_model(model, read_document(source), str(source))
    return parse_model(model, source)


def load_graph(source) -> MetricGraph:
    return load_model(MetricGraph, source)


def load_group(source) -> GroupScenario:
    return load_model(GroupScenario, source)


def load_polygon(source) -> PolygonOfGroups:
    return load_model(PolygonOfGroups, source)


def load_coned_graph(source) -> ConedGraph:
    """
    Coned graph from {"vertices", "edges", ..., "cones": [{"id", "members"}]}.

    The extended graph is rebuilt from the base and the cones.
    """
    data = read_document(source) if isinstance(source, (str, Path)) else dict(source)
    cones = data.pop("cones", [])
    base = parse_model(MetricGraph, data, "base graph")
    sets = {}
    for cone in cones:
        if not isinstance(cone, dict) or "id" not in cone or "members" not in cone:
            raise SchemaError(f"Cone entries need 'id' and 'members': {cone!r}")
        sets[str(cone["id"])] = cone["members"]
    return cone_off(base, sets, measure=False)


def dump_coned_graph(cg: ConedGraph) -> Dict[str, Any]:
    """Base graph object plus its cones; the extended graph travels separately."""
    data = to_jsonable(cg.base)
    data["cones"] = [{"id": c.set_id, "members": list(c.members)} for c in cg.coned_sets]
    return data
