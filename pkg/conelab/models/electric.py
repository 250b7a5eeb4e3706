from typing import Dict, FrozenSet, Optional, Tuple

from pydantic import Field

from .graph import DeltaReport, MetricGraph, QuasiParams
from .types import FrozenModel, Rational, VertexId


class ConedSet(FrozenModel):
    set_id: str = Field(alias="id")
    members: Tuple[VertexId, ...]


class ConeMetadata(FrozenModel):
    """Constants measured on the base when the cone-off is built."""
    delta: DeltaReport
    k0: Rational
    lambda0: Rational
    calibration_pairs: int
    seed: int


class ConedGraph(FrozenModel):
    """Base graph plus one cone vertex per coned set, joined by unit edges."""
    base: MetricGraph
    coned_sets: Tuple[ConedSet, ...] = Field(default=(), alias="cones")
    cone_vertices: Dict[str, VertexId] = Field(default_factory=dict)
    extended: MetricGraph
    metadata: Optional[ConeMetadata] = None

    def members(self, set_id: str) -> FrozenSet[VertexId]:
        for coned in self.coned_sets:
            if coned.set_id == set_id:
                return frozenset(coned.members)
        raise KeyError(set_id)

    def is_cone(self, vertex: VertexId) -> bool:
        return vertex >= self.base.vertex_count

    def set_of_cone(self, vertex: VertexId) -> str:
        return self.coned_sets[vertex - self.base.vertex_count].set_id


class ElectricPath(FrozenModel):
    set_id: str
    x: VertexId
    x_prime: VertexId
    vertices: Tuple[VertexId, VertexId, VertexId]
    length: Rational


class ConeComparison(FrozenModel):
    """Identity-on-base map between two cone-offs of the same graph."""
    hausdorff_bound: Rational
    params: QuasiParams


class FellowTravelRow(FrozenModel):
    u: VertexId
    v: VertexId
    d_base: Rational
    d_extended: Rational
    hausdorff: Rational


class LengthBoundRow(FrozenModel):
    """Max quasiconvexity constant of de-electrified geodesics up to an extended length."""
    length: Rational
    paths: int
    max_constant: Rational


class LocalFinitenessRow(FrozenModel):
    radius: Rational
    sets_met: int


class DivergenceBoundRow(FrozenModel):
    """Smallest base distance D' seen among triples at extended distance >= D."""
    extended_distance: Rational
    triples: int
    min_base_distance: Optional[Rational] = None
