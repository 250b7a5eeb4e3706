from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import Field, PrivateAttr, model_validator

from .boundary import PropernessProfile
from .graph import MetricGraph, QuasiParams
from .group import GroupScenario, SubgroupSpec
from .types import FrozenModel, Letter, Rational, VertexId

TRIVIAL_GROUP = {"kind": "free_group", "rank": 0, "name": "trivial"}


def _generator_order(group: GroupScenario, word: str) -> int:
    """Order of a single-generator word in a free product of cyclics, else 0."""
    symbol = word.strip()
    if group.kind != "free_product_cyclic" or symbol not in group.free_generators:
        return 0
    return dict(zip(group.free_generators, group.orders or ())).get(symbol, 0)


class ComplexEdge(FrozenModel):
    """Edge group with its injections into the two end vertex groups."""
    name: str
    ends: Tuple[str, str]
    group: GroupScenario = Field(default_factory=lambda: GroupScenario.model_validate(TRIVIAL_GROUP))
    # end vertex name -> {edge generator: word in the vertex group}
    maps: Dict[str, Dict[str, str]] = Field(default_factory=dict)


class ComplexFace(FrozenModel):
    """Face group with its injections into the edge groups."""
    group: GroupScenario = Field(default_factory=lambda: GroupScenario.model_validate(TRIVIAL_GROUP))
    # edge name -> {face generator: word in the edge group}
    maps: Dict[str, Dict[str, str]] = Field(default_factory=dict)


class PolygonOfGroups(FrozenModel):
    """
    Simple complex of groups over a polygon (or over a single edge when no
    face is given). Vertex order fixes the naming of the fundamental group.
    """
    name: str = ""
    sides: Optional[int] = None
    vertices: Dict[str, GroupScenario]
    edges: Tuple[ComplexEdge, ...]
    face: Optional[ComplexFace] = None

    @model_validator(mode="before")
    @classmethod
    def accept_compact_form(cls, value: Any) -> Any:
        """
        Accept {"sides": n, "vertex_groups": [...], "edge_maps": {"e3": {"into_v1": {...}}}}.

        Vertices are named v1..vn. An edge group not listed under
        "edge_groups" is the free product of cyclics on its map keys, each
        of the order of its image in the first end. Three or more sides give a
        face (trivial unless "face_group" is set).
        """
        if not isinstance(value, dict) or "vertex_groups" not in value:
            return value
        groups = [GroupScenario.model_validate(g) for g in value["vertex_groups"]]
        vertices = {f"v{i + 1}": group for i, group in enumerate(groups)}
        edge_groups = value.get("edge_groups", {})
        edges = []
        for name, raw_maps in value.get("edge_maps", {}).items():
            maps = {key[len("into_"):] if key.startswith("into_") else key: images for key, images in raw_maps.items()}
            ends = list(maps)
            if name in edge_groups:
                group = edge_groups[name]
            else:
                first = vertices.get(ends[0]) if ends else None
                orders = tuple(_generator_order(first, word) for word in maps[ends[0]].values()) if first else ()
                group = {"kind": "free_product_cyclic", "orders": orders, "generators": tuple(maps[ends[0]])}
            edges.append({"name": name, "ends": ends, "group": group, "maps": maps})
        result = {key: v for key, v in value.items() if key not in ("vertex_groups", "edge_groups", "edge_maps", "face_group", "face_maps")}
        result.update({"vertices": vertices, "edges": edges})
        if len(edges) >= 3:
            result["face"] = {
                "group": value.get("face_group", TRIVIAL_GROUP),
                "maps": {k[len("into_"):] if k.startswith("into_") else k: m for k, m in value.get("face_maps", {}).items()},
            }
        return result

    @model_validator(mode="after")
    def check_shape(self) -> "PolygonOfGroups":
        names = set(self.vertices)
        for edge in self.edges:
            if len(set(edge.ends)) != 2 or not set(edge.ends) <= names:
                raise ValueError(f"Edge {edge.name} must join two distinct known vertices")
            if not set(edge.maps) <= set(edge.ends):
                raise ValueError(f"Edge {edge.name} maps into a vertex it does not touch")
        if self.face is not None:
            if len(self.edges) < 3:
                raise ValueError("A polygon has at least 3 sides")
            degree = {name: 0 for name in names}
            for edge in self.edges:
                for end in edge.ends:
                    degree[end] += 1
            if any(d != 2 for d in degree.values()) or len(self.edges) != len(names):
                raise ValueError("Edges of a polygon must form a single cycle through every vertex")
            if not set(self.face.maps) <= {edge.name for edge in self.edges}:
                raise ValueError("Face maps into an unknown edge")
        if self.sides is not None and self.sides != len(self.edges):
            raise ValueError(f"sides={self.sides} but {len(self.edges)} edges were given")
        return self

    @property
    def n_sides(self) -> int:
        return len(self.edges)

    @property
    def vertex_names(self) -> List[str]:
        return list(self.vertices)

    def edge(self, name: str) -> ComplexEdge:
        for edge in self.edges:
            if edge.name == name:
                return edge
        raise KeyError(name)


class FundamentalGroup(FrozenModel):
    """Pushout of a complex of groups with the images of its local groups."""
    group: GroupScenario
    identification: Dict[str, str]
    symbol_map: Dict[str, Dict[str, str]]
    vertex_subgroups: Dict[str, SubgroupSpec]
    edge_subgroups: Dict[str, SubgroupSpec]
    face_subgroup: Optional[SubgroupSpec] = None


class RegistryEntry(FrozenModel):
    vertex_id: VertexId
    face_label: str
    representative: str


class DevelopmentBall(FrozenModel):
    """Ball of the 1-skeleton of a development (or of a Bass-Serre tree)."""
    skeleton: MetricGraph
    registry: Tuple[RegistryEntry, ...]
    faces: Tuple[Tuple[VertexId, ...], ...] = ()
    edge_cosets: Tuple[Tuple[str, VertexId, VertexId], ...] = ()
    radius: int
    generators: Tuple[str, ...]
    is_tree: bool = False
    group: GroupScenario
    vertex_subgroups: Dict[str, SubgroupSpec]
    elements: Tuple[Tuple[Letter, ...], ...] = ()

    # (face label, coset number) -> vertex id, plus per-label representatives
    _lookup: Any = PrivateAttr(default=None)

    @property
    def exact_metric(self) -> bool:
        """Tree balls are convex, so their distances are the true tree distances."""
        return self.is_tree

    def boundary_affected(self, distance) -> bool:
        return not self.exact_metric and distance >= self.radius - 1

    def vertex_label(self, vertex: VertexId) -> str:
        return self.registry[vertex].face_label


class LocalMapCheck(FrozenModel):
    source: str
    target: str
    scanned: int
    injective: bool


class IntersectionCheck(FrozenModel):
    vertex: str
    edges: Tuple[str, str]
    intersection: int
    face_image: int
    holds: bool


class EmbeddingRow(FrozenModel):
    source: VertexId
    target: VertexId
    d_source: Rational
    d_target: Rational
    boundary_affected: bool = False


class EmbeddingProfile(FrozenModel):
    rows: Tuple[EmbeddingRow, ...]
    properness: PropernessProfile


class FamilyRow(FrozenModel):
    """Distance from the base vertex to one coset of a word family."""
    n: int
    reading: Literal["blocks", "letters"]
    word: str
    d_tree: Rational
    d_development: Rational
    matches_n_plus_1: bool
    boundary_affected: bool = False


class FamilyProfile(FrozenModel):
    rows: Tuple[FamilyRow, ...]
    matching_readings: Tuple[str, ...]


class DevelopmentComparison(FrozenModel):
    params: QuasiParams
    radius: int
    annulus: int
    clear_vertices: int


class EdgeConcatVerdict(FrozenModel):
    triple: Tuple[VertexId, VertexId, VertexId]
    distance: Rational
    verdict: Literal["geodesic", "shortcut", "not applicable"]
    distinct_faces: Optional[bool] = None
    faces_first: Tuple[int, ...] = ()
    faces_second: Tuple[int, ...] = ()
    caveat: str = "1-skeleton distance only"


class StabilizerRow(FrozenModel):
    u: VertexId
    v: VertexId
    distance: Rational
    common_fixers: int


class AcylindricityProbe(FrozenModel):
    threshold: int
    element_radius: int
    rows: Tuple[StabilizerRow, ...]
    max_common_fixers: int
    label: str = "finite-scale evidence"
