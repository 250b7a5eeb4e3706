from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from pydantic import Field, PrivateAttr, field_validator, model_validator

from .types import DeltaConstant, DeltaMode, FrozenModel, Rational, VertexId
from conelab.utils.rational import parse_rational

Edge = Tuple[VertexId, VertexId, Rational]


class MetricGraph(FrozenModel):
    """Finite weighted graph with exact rational edge lengths."""
    vertex_count: int = Field(alias="vertices", ge=0)
    edges: Tuple[Edge, ...] = ()
    labels: Dict[VertexId, str] = Field(default_factory=dict)
    metadata: Dict[str, str] = Field(default_factory=dict)

    # Lazily built distance oracle, see services.metric_core.metric_of
    _metric: Any = PrivateAttr(default=None)

    @field_validator("edges", mode="before")
    @classmethod
    def collapse_parallel_edges(cls, value: Any) -> Any:
        """Orient edges as (min, max), keep the shortest of parallel edges, sort."""
        if value is None:
            return ()
        shortest: Dict[Tuple[int, int], Fraction] = {}
        for raw in value:
            items = list(raw)
            if len(items) == 2:
                items.append(1)
            if len(items) != 3:
                raise ValueError(f"Edge must be [u, v] or [u, v, length]: {raw!r}")
            u, v = int(items[0]), int(items[1])
            length = parse_rational(items[2])
            key = (min(u, v), max(u, v))
            if key not in shortest or length < shortest[key]:
                shortest[key] = length
        return tuple((u, v, length) for (u, v), length in sorted(shortest.items()))

    def neighbors(self) -> List[Dict[VertexId, Fraction]]:
        """Adjacency lists (self-loops ignored)."""
        adjacency: List[Dict[VertexId, Fraction]] = [dict() for _ in range(self.vertex_count)]
        for u, v, length in self.edges:
            if u == v or not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                continue
            adjacency[u][v] = length
            adjacency[v][u] = length
        return adjacency

    @property
    def is_unit(self) -> bool:
        """True when every edge has length 1."""
        return all(length == 1 for _, _, length in self.edges)

    @classmethod
    def from_edges(cls, vertex_count: int, edges, labels: Optional[Dict[int, str]] = None) -> "MetricGraph":
        """Convenience constructor accepting (u, v) or (u, v, length) tuples."""
        return cls(vertices=vertex_count, edges=list(edges), labels=labels or {})


class GraphDiagnostics(FrozenModel):
    """Result of validate()."""
    vertex_count: int
    edge_count: int
    connected: bool
    component_count: int
    self_loops: Tuple[Tuple[VertexId, VertexId], ...] = ()
    weight_violations: Tuple[Edge, ...] = ()
    out_of_range: Tuple[Tuple[VertexId, VertexId], ...] = ()

    @property
    def ok(self) -> bool:
        return self.connected and not (self.self_loops or self.weight_violations or self.out_of_range)


class GeodesicPath(FrozenModel):
    vertices: Tuple[VertexId, ...]
    total_length: Rational

    @model_validator(mode="after")
    def check_nonempty(self) -> "GeodesicPath":
        if not self.vertices:
            raise ValueError("A geodesic has at least one vertex")
        return self


class DottedPath(FrozenModel):
    """Vertex sequence whose consecutive entries are at distance <= step_bound."""
    vertices: Tuple[VertexId, ...]
    step_bound: Rational = Fraction(1)


class QuasiParams(FrozenModel):
    """Two-sided sandwich d/lambda - eps <= d' <= lambda d + eps."""
    lam: Rational = Field(alias="lambda")
    eps: Rational
    pair_count: int = 0
    fallback: bool = False

    @model_validator(mode="after")
    def check_ranges(self) -> "QuasiParams":
        if self.lam < 1 or self.eps < 0:
            raise ValueError("lambda must be >= 1 and eps >= 0")
        return self


class DeltaReport(FrozenModel):
    """Measured hyperbolicity constant with the certificate that realizes it."""
    value: Rational
    constant: DeltaConstant = "four-point"
    mode: DeltaMode = "exhaustive"
    vertex_count: int
    quadruples: int
    certificate: Optional[Tuple[VertexId, ...]] = None
    seed: Optional[int] = None
