from .types import FrozenModel, Letter, Rational, VertexId
from .graph import DeltaReport, GeodesicPath, GraphDiagnostics, MetricGraph, QuasiParams
from .electric import ConedGraph, ConedSet, ConeMetadata
from .group import CayleyBall, CosetGraph, GroupScenario, SubgroupSpec, Word
from .boundary import DivergenceProfile, MitraProfile, PropernessProfile, RayClass
from .complex import DevelopmentBall, FundamentalGroup, PolygonOfGroups
from .scenario import Manifest, Scenario

__all__ = [
    "FrozenModel", "Letter", "Rational", "VertexId",
    "DeltaReport", "GeodesicPath", "GraphDiagnostics", "MetricGraph", "QuasiParams",
    "ConedGraph", "ConedSet", "ConeMetadata",
    "CayleyBall", "CosetGraph", "GroupScenario", "SubgroupSpec", "Word",
    "DivergenceProfile", "MitraProfile", "PropernessProfile", "RayClass",
    "DevelopmentBall", "FundamentalGroup", "PolygonOfGroups",
    "Manifest", "Scenario",
]
