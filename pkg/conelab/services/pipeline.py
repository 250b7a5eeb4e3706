"""
Scenario pipeline: resolves inputs, runs the registered operation steps in
order and writes their JSON summaries, CSV tables and a sha256 manifest.
"""
import hashlib
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence

import networkx as nx
import numpy as np

from conelab.core.config import settings
from conelab.models.complex import DevelopmentBall, PolygonOfGroups
from conelab.models.electric import ConedGraph
from conelab.models.graph import MetricGraph
from conelab.models.group import CayleyBall, CosetGraph, GroupScenario
from conelab.models.scenario import Artifact, Manifest, Scenario
from conelab.scenarios.catalog import bundled_scenario
from conelab.services import boundary, complex_dev, electrify, group_words, metric_core
from conelab.utils.csv_export import Table, write_csv
from conelab.utils.errors import BudgetExceededError, SchemaError, UnknownOperationError
from conelab.utils.json_io import (
    dump_coned_graph,
    load_coned_graph,
    load_graph,
    load_group,
    load_polygon,
    parse_model,
    read_document,
    to_jsonable,
    write_json,
)
from conelab.utils.rational import parse_rational

logger = logging.getLogger(__name__)

_MISSING = object()


class StepOutput(NamedTuple):
    """Value kept for later steps, JSON summary, and CSV tables by suffix."""
    value: Any
    summary: Any
    tables: Optional[Dict[str, Table]] = None


StepFunction = Callable[["RunContext", Dict[str, Any]], StepOutput]


class StepRegistry:
    """
    Registry for pipeline operations.
    Maps operation names used in scenario files to step functions.
    """

    _steps: Dict[str, StepFunction] = {}

    @classmethod
    def register(cls, op: str) -> Callable[[StepFunction], StepFunction]:
        """
        Register a step function under an operation name.

        Args:
            op: Operation name (e.g., "delta_four_point")
        """
        def decorator(function: StepFunction) -> StepFunction:
            cls._steps[op] = function
            return function
        return decorator

    @classmethod
    def get(cls, op: str) -> StepFunction:
        """
        Raises:
            UnknownOperationError: If op is not registered
        """
        step = cls._steps.get(op)
        if step is None:
            raise UnknownOperationError(f"Unknown operation: {op}. Available operations: {', '.join(sorted(cls._steps))}")
        return step

    @classmethod
    def list_ops(cls) -> List[str]:
        return sorted(cls._steps)


class RunContext:
    """Values produced so far, plus the seed, budgets and output directory of a run."""

    def __init__(
        self,
        scenario: Scenario,
        out_dir: Path,
        seed: int,
        budget_vertices: Optional[int] = None,
    ):
        self.scenario = scenario
        self.out_dir = out_dir
        self.seed = seed
        self.budget_vertices = budget_vertices or scenario.budgets.vertices
        self.delta_budget = scenario.budgets.delta_exhaustive
        self.values: Dict[str, Any] = {}

    def resolve(self, value: Any) -> Any:
        if isinstance(value, str) and value.startswith("$"):
            name = value[1:]
            if name not in self.values:
                raise SchemaError(f"Reference {value} names no input or earlier step")
            return self.values[name]
        return value

    def get(self, params: Dict[str, Any], key: str, default: Any = _MISSING) -> Any:
        if key not in params:
            if default is _MISSING:
                raise SchemaError(f"Missing parameter {key!r}")
            return default
        return self.resolve(params[key])

    def graph(self, params: Dict[str, Any], key: str = "graph") -> MetricGraph:
        value = self.get(params, key)
        use = params.get("use", "base")
        if isinstance(value, ConedGraph):
            graph = value.extended if use == "extended" else value.base
        elif isinstance(value, DevelopmentBall):
            graph = value.skeleton
        elif isinstance(value, (CayleyBall, CosetGraph)):
            graph = value.graph
        elif isinstance(value, MetricGraph):
            graph = value
        else:
            graph = load_graph(value)
        return self.check_size(graph)

    def check_size(self, graph: MetricGraph) -> MetricGraph:
        if self.budget_vertices is not None and graph.vertex_count > self.budget_vertices:
            raise BudgetExceededError(f"Graph with {graph.vertex_count} vertices exceeds the vertex budget {self.budget_vertices}")
        return graph

    def coned(self, params: Dict[str, Any], key: str = "coned") -> ConedGraph:
        value = self.get(params, key)
        if not isinstance(value, ConedGraph):
            raise SchemaError(f"Parameter {key!r} must refer to a coned graph")
        return value

    def group(self, params: Dict[str, Any], key: str = "group") -> GroupScenario:
        value = self.get(params, key)
        return value if isinstance(value, GroupScenario) else load_group(value)

    def polygon(self, params: Dict[str, Any], key: str = "polygon") -> PolygonOfGroups:
        value = self.get(params, key)
        return value if isinstance(value, PolygonOfGroups) else load_polygon(value)

    def ball(self, params: Dict[str, Any], key: str) -> DevelopmentBall:
        value = self.get(params, key)
        if not isinstance(value, DevelopmentBall):
            raise SchemaError(f"Parameter {key!r} must refer to a development or Bass-Serre ball")
        return value


# metric-core

@StepRegistry.register("validate")
def _validate(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    report = metric_core.validate(ctx.graph(params))
    return StepOutput(report, report)


@StepRegistry.register("distance")
def _distance(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    u, v = int(ctx.get(params, "u")), int(ctx.get(params, "v"))
    value = metric_core.distance(ctx.graph(params), u, v)
    return StepOutput(value, {"u": u, "v": v, "distance": value})


@StepRegistry.register("geodesic")
def _geodesic(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    path = metric_core.geodesic(ctx.graph(params), int(ctx.get(params, "u")), int(ctx.get(params, "v")))
    return StepOutput(path, path)


@StepRegistry.register("interval")
def _interval(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    members = sorted(metric_core.interval(ctx.graph(params), int(ctx.get(params, "u")), int(ctx.get(params, "v"))))
    return StepOutput(members, {"members": members, "size": len(members)})


@StepRegistry.register("gromov_product")
def _gromov_product(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    value = metric_core.gromov_product(
        ctx.graph(params), int(ctx.get(params, "base")), int(ctx.get(params, "a")), int(ctx.get(params, "b"))
    )
    return StepOutput(value, {"gromov_product": value})


@StepRegistry.register("hausdorff_distance")
def _hausdorff(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    value = metric_core.hausdorff_distance(ctx.graph(params), _vertex_set(ctx, params, "first"), _vertex_set(ctx, params, "second"))
    return StepOutput(value, {"hausdorff": value})


@StepRegistry.register("nearest_point_projection")
def _projection(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    x = int(ctx.get(params, "x"))
    point = metric_core.nearest_point_projection(ctx.graph(params), _vertex_set(ctx, params, "members"), x)
    return StepOutput(point, {"x": x, "projection": point})


def _vertex_set(ctx: RunContext, params: Dict[str, Any], key: str) -> List[int]:
    """Vertex ids from a list or from an earlier path or interval step."""
    value = ctx.get(params, key)
    if hasattr(value, "vertices"):
        value = value.vertices
    return [int(v) for v in value]


@StepRegistry.register("delta_four_point")
def _delta(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    report = metric_core.delta_four_point(
        ctx.graph(params),
        mode=params.get("mode", "exhaustive"),
        count=params.get("count"),
        seed=ctx.seed,
        budget=ctx.delta_budget,
    )
    return StepOutput(report, report)


@StepRegistry.register("slim_triangle_constant")
def _slim(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    value = metric_core.slim_triangle_constant(ctx.graph(params))
    return StepOutput(value, {"delta": value, "constant": "slim-triangle"})


@StepRegistry.register("quasiconvexity_constant")
def _quasiconvexity(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    value = metric_core.quasiconvexity_constant(ctx.graph(params), ctx.get(params, "members"))
    return StepOutput(value, {"k": value})


@StepRegistry.register("polygon_slimness")
def _polygon_slimness(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    value = metric_core.polygon_slimness(ctx.graph(params), [int(v) for v in ctx.get(params, "corners")])
    return StepOutput(value, {"slimness": value})


@StepRegistry.register("measure_quasigeodesic")
def _quasigeodesic(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    result = metric_core.measure_quasigeodesic(ctx.graph(params), [int(v) for v in ctx.get(params, "path")])
    return StepOutput(result, result)


# electrify

@StepRegistry.register("cone_off")
def _cone_off(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    cg = electrify.cone_off(
        ctx.graph(params),
        ctx.get(params, "sets"),
        measure=params.get("measure", True),
        seed=ctx.seed,
        delta_budget=ctx.delta_budget,
    )
    summary = {"coned": dump_coned_graph(cg), "metadata": cg.metadata, "extended": cg.extended}
    return StepOutput(cg, summary)


@StepRegistry.register("electric_path")
def _electric_path(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    path = electrify.electric_path(
        ctx.coned(params), str(ctx.get(params, "set_id")), int(ctx.get(params, "x")), int(ctx.get(params, "x_prime"))
    )
    return StepOutput(path, path)


@StepRegistry.register("de_electrify")
def _de_electrify(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    dotted = electrify.de_electrify(ctx.coned(params), _vertex_set(ctx, params, "path"))
    return StepOutput(dotted, dotted)


@StepRegistry.register("compare_cone_offs")
def _compare(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    result = electrify.compare_cone_offs(
        ctx.graph(params), ctx.get(params, "sets_a"), ctx.get(params, "sets_b"), seed=ctx.seed
    )
    return StepOutput(result, result)


@StepRegistry.register("fellow_travel_stats")
def _fellow_travel(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    rows = electrify.fellow_travel_stats(ctx.coned(params), ctx.get(params, "pairs", None))
    worst = max((row.hausdorff for row in rows), default=Fraction(0))
    table = (["u", "v", "d_base", "d_extended", "hausdorff"], [(r.u, r.v, r.d_base, r.d_extended, r.hausdorff) for r in rows])
    return StepOutput(rows, {"pairs": len(rows), "max_hausdorff": worst}, {"": table})


@StepRegistry.register("attach_horoballs")
def _horoballs(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    cusped = electrify.attach_horoballs(ctx.graph(params), ctx.get(params, "sets"), int(ctx.get(params, "depth")))
    return StepOutput(ctx.check_size(cusped), cusped)


@StepRegistry.register("local_finiteness_profile")
def _local_finiteness(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    rows = electrify.local_finiteness_profile(
        ctx.graph(params), ctx.get(params, "sets"), int(ctx.get(params, "center", 0)), ctx.get(params, "radii")
    )
    table = (["radius", "sets_met"], [(r.radius, r.sets_met) for r in rows])
    return StepOutput(rows, {"rows": rows}, {"": table})


@StepRegistry.register("de_electrification_profile")
def _de_electrification(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    rows = electrify.de_electrification_profile(
        ctx.coned(params), int(ctx.get(params, "max_length")), seed=ctx.seed, pair_limit=params.get("pair_limit")
    )
    table = (["length", "paths", "max_constant"], [(r.length, r.paths, r.max_constant) for r in rows])
    return StepOutput(rows, {"rows": rows}, {"": table})


@StepRegistry.register("electric_divergence_profile")
def _electric_divergence(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    rows, violations = electrify.electric_divergence_profile(
        ctx.coned(params), int(ctx.get(params, "max_distance")), samples=int(params.get("samples", 500)), seed=ctx.seed
    )
    table = (["extended_distance", "triples", "min_base_distance"], [(r.extended_distance, r.triples, r.min_base_distance) for r in rows])
    return StepOutput(rows, {"rows": rows, "violations": violations}, {"": table})


def random_tree(n: int, seed: int) -> MetricGraph:
    """Uniform random labeled tree on n vertices from a seeded Pruefer sequence."""
    if n < 2:
        return MetricGraph(vertices=max(n, 0))
    rng = np.random.default_rng(seed)
    tree = nx.from_prufer_sequence([int(x) for x in rng.integers(0, n, size=n - 2)])
    return MetricGraph(vertices=n, edges=sorted(tree.edges()))


def cycle_graph(n: int) -> MetricGraph:
    return MetricGraph(vertices=n, edges=[(i, (i + 1) % n) for i in range(n)])


def _subtree_cones(tree: MetricGraph, count: int, max_radius: int, rng: np.random.Generator) -> Dict[str, List[int]]:
    metric = metric_core.metric_of(tree)
    sets = {}
    for i in range(count):
        center = int(rng.integers(0, tree.vertex_count))
        radius = int(rng.integers(0, max_radius + 1))
        row = metric.row(center)
        sets[f"A{i}"] = [v for v in range(tree.vertex_count) if row[v] <= radius]
    return sets


@StepRegistry.register("tree_cone_family")
def _tree_cone_family(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    """delta of the extended graph and quasiconvexity of a tree segment across random trees."""
    sizes = [int(n) for n in ctx.get(params, "sizes")]
    instances = int(params.get("instances", 5))
    cones = int(params.get("cones", 5))
    cone_radius = int(params.get("cone_radius", 3))
    measures = params.get("measures", ["delta", "qc"])
    mode = params.get("mode", "auto")
    rows = []
    for size in sizes:
        for instance in range(instances):
            seed = ctx.seed + 1000 * size + instance
            rng = np.random.default_rng(seed)
            tree = ctx.check_size(random_tree(size, seed))
            cg = electrify.cone_off(tree, _subtree_cones(tree, cones, cone_radius, rng), measure=False)
            delta = qc = None
            delta_mode = None
            if "delta" in measures:
                report = metric_core.delta_four_point(cg.extended, mode=mode, seed=seed, budget=ctx.delta_budget)
                delta, delta_mode = report.value, report.mode
            if "qc" in measures:
                u, v = (int(x) for x in rng.integers(0, size, size=2))
                segment = metric_core.geodesic(tree, u, v).vertices
                qc = metric_core.quasiconvexity_constant(cg.extended, segment)
            rows.append((size, instance, seed, delta, delta_mode, qc))
            logger.debug("tree %d/%d: delta=%s qc=%s", size, instance, delta, qc)
    summary = {
        "instances": len(rows),
        "max_delta": max((r[3] for r in rows if r[3] is not None), default=None),
        "max_qc": max((r[5] for r in rows if r[5] is not None), default=None),
    }
    table = (["size", "instance", "seed", "delta_extended", "delta_mode", "qc_segment_extended"], rows)
    return StepOutput(rows, summary, {"": table})


@StepRegistry.register("cycle_fellow_travel")
def _cycle_fellow_travel(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    """Cycles C_2n with one antipodal pair coned: worst Hausdorff distance per n."""
    rows = []
    for n in range(int(ctx.get(params, "n_min", 6)), int(ctx.get(params, "n_max", 30)) + 1):
        cycle = cycle_graph(2 * n)
        cg = electrify.cone_off(cycle, {"antipodes": [0, n]}, measure=False)
        stats = electrify.fellow_travel_stats(cg)
        rows.append((2 * n, max(row.hausdorff for row in stats)))
    table = (["cycle_length", "max_hausdorff"], rows)
    return StepOutput(rows, {"max_hausdorff": max(r[1] for r in rows)}, {"": table})


# group-words

def _registry_table(elements) -> Table:
    return (["vertex_id", "normal_form"], [(i, group_words.format_word(e)) for i, e in enumerate(elements)])


@StepRegistry.register("normal_form")
def _normal_form(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    word = group_words.normal_form(ctx.group(params), ctx.get(params, "word"))
    return StepOutput(word, {"normal_form": group_words.format_word(word), "length": len(word.letters)})


@StepRegistry.register("subgroup_membership")
def _membership(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    word = ctx.get(params, "word")
    member = group_words.subgroup_membership(ctx.group(params), ctx.get(params, "subgroup"), word)
    return StepOutput(member, {"word": word if isinstance(word, str) else group_words.format_word(word), "member": member})


@StepRegistry.register("cayley_ball")
def _cayley_ball(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    ball = group_words.cayley_ball(
        ctx.group(params), params.get("gens"), int(ctx.get(params, "radius")), budget=ctx.budget_vertices
    )
    return StepOutput(ball, {"graph": ball.graph, "radius": ball.radius, "generators": ball.generators}, {"registry": _registry_table(ball.elements)})


@StepRegistry.register("coset_graph_ball")
def _coset_graph(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    coset_graph = group_words.coset_graph_ball(
        ctx.group(params), ctx.get(params, "subgroup"), params.get("gens"), int(ctx.get(params, "radius")),
        budget=ctx.budget_vertices,
    )
    return StepOutput(coset_graph, {"graph": coset_graph.graph, "radius": coset_graph.radius}, {"registry": _registry_table(coset_graph.representatives)})


@StepRegistry.register("height_probe")
def _height(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    probe = group_words.height_probe(
        ctx.group(params), ctx.get(params, "subgroup"), int(ctx.get(params, "radius")), int(params.get("max_n", 4)),
        params.get("gens"), budget=ctx.budget_vertices,
    )
    return StepOutput(probe, probe)


@StepRegistry.register("distortion_profile")
def _distortion(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    profile = group_words.distortion_profile(
        ctx.group(params), int(ctx.get(params, "k_max")), params.get("generator"), params.get("search_k"),
        budget=ctx.budget_vertices,
    )
    table = (
        ["k", "fiber_length", "ambient_length", "ambient_method", "ratio"],
        [(r.k, r.fiber_length, r.ambient_length, r.ambient_method, r.ratio) for r in profile.rows],
    )
    return StepOutput(profile, profile, {"": table})


# complex-dev

@StepRegistry.register("fundamental_group")
def _fundamental_group(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    fg = complex_dev.fundamental_group(ctx.polygon(params))
    return StepOutput(fg, fg)


@StepRegistry.register("check_local_maps")
def _local_maps(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    checks = complex_dev.check_local_maps(ctx.polygon(params), params.get("radius"), budget=ctx.budget_vertices)
    return StepOutput(checks, {"checks": checks, "all_injective": all(c.injective for c in checks)})


@StepRegistry.register("intersection_condition_check")
def _intersections(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    rows = complex_dev.intersection_condition_check(ctx.polygon(params), params.get("radius"), budget=ctx.budget_vertices)
    return StepOutput(rows, {"rows": rows, "holds": all(r.holds for r in rows)})


def _ball_output(ball: DevelopmentBall) -> StepOutput:
    summary = {
        "skeleton": ball.skeleton,
        "radius": ball.radius,
        "generators": ball.generators,
        "is_tree": ball.is_tree,
        "faces": len(ball.faces),
        "edge_cosets": len(ball.edge_cosets),
    }
    registry = (["vertex_id", "face_label", "representative"], [(e.vertex_id, e.face_label, e.representative) for e in ball.registry])
    return StepOutput(ball, summary, {"registry": registry})


@StepRegistry.register("development_ball")
def _development_ball(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    ball = complex_dev.development_ball(
        ctx.polygon(params), int(ctx.get(params, "radius")), params.get("gens"), budget=ctx.budget_vertices
    )
    ctx.check_size(ball.skeleton)
    return _ball_output(ball)


@StepRegistry.register("build_bass_serre_ball")
def _bass_serre_ball(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    if "group" in params:
        amalgam = ctx.group(params)
    else:
        sub = complex_dev.restrict(ctx.polygon(params), ctx.get(params, "sub_edges"))
        amalgam = complex_dev.as_amalgam(sub)
    ball = complex_dev.build_bass_serre_ball(amalgam, int(ctx.get(params, "radius")), params.get("gens"), budget=ctx.budget_vertices)
    ctx.check_size(ball.skeleton)
    return _ball_output(ball)


@StepRegistry.register("alternating_family_profile")
def _family(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    profile = complex_dev.alternating_family_profile(
        ctx.polygon(params),
        ctx.get(params, "sub_edges"),
        tuple(params.get("letters", ("d", "b"))),
        int(params.get("n_max", 6)),
        params.get("radius"),
        params.get("gens"),
        budget=ctx.budget_vertices,
    )
    table = (
        ["n", "reading", "word", "d_tree", "d_development", "matches_n_plus_1", "boundary_affected"],
        [(r.n, r.reading, r.word, r.d_tree, r.d_development, r.matches_n_plus_1, r.boundary_affected) for r in profile.rows],
    )
    return StepOutput(profile, profile, {"": table})


@StepRegistry.register("embedding_profile")
def _embedding(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    profile = complex_dev.embedding_profile(
        ctx.ball(params, "source"), ctx.ball(params, "target"),
        samples=int(params.get("samples", 2000)), probe_m=params.get("probe_m"), seed=ctx.seed,
    )
    rows = (
        ["source", "target", "d_source", "d_target", "boundary_affected"],
        [(r.source, r.target, r.d_source, r.d_target, r.boundary_affected) for r in profile.rows],
    )
    properness = (["m", "rho"], list(profile.properness.table))
    return StepOutput(profile, profile.properness, {"pairs": rows, "properness": properness})


@StepRegistry.register("coned_cayley_vs_development")
def _coned_cayley(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    comparison = complex_dev.coned_cayley_vs_development(
        ctx.polygon(params), int(ctx.get(params, "radius")), params.get("gens"),
        annulus=int(params.get("annulus", 2)), seed=ctx.seed, budget=ctx.budget_vertices,
    )
    return StepOutput(comparison, comparison)


@StepRegistry.register("acylindricity_probe")
def _acylindricity(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    probe = complex_dev.acylindricity_probe(
        ctx.ball(params, "ball"), int(ctx.get(params, "threshold")),
        element_radius=int(params.get("element_radius", 2)), max_pairs=int(params.get("max_pairs", 200)), seed=ctx.seed,
    )
    table = (["u", "v", "distance", "common_fixers"], [(r.u, r.v, r.distance, r.common_fixers) for r in probe.rows])
    return StepOutput(probe, {"threshold": probe.threshold, "max_common_fixers": probe.max_common_fixers, "label": probe.label}, {"": table})


# boundary-diagnostics

def _vertex_map(ctx: RunContext, params: Dict[str, Any], source: Any, target: Any, n: int) -> List[int]:
    spec = ctx.get(params, "map", "identity")
    if spec == "identity":
        return list(range(n))
    if spec == "cosets":
        if not (isinstance(source, DevelopmentBall) and isinstance(target, DevelopmentBall)):
            raise SchemaError("map 'cosets' needs two development or Bass-Serre balls")
        return complex_dev.coset_map(source, target)
    if isinstance(spec, (list, tuple)):
        return [int(v) for v in spec]
    raise SchemaError(f"map must be 'identity', 'cosets' or a list of vertex ids, got {spec!r}")


def _mitra_output(profile) -> StepOutput:
    return StepOutput(profile, profile, {"": (["N", "M"], list(profile.table))})


@StepRegistry.register("mitra_profile")
def _mitra(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    source, target = ctx.get(params, "source"), ctx.get(params, "target")
    y, x = ctx.graph(params, "source"), ctx.graph(params, "target")
    f = _vertex_map(ctx, params, source, target, y.vertex_count)
    cutoff = None
    if isinstance(target, DevelopmentBall) and not target.exact_metric:
        cutoff = Fraction(target.radius - 1)
    profile = boundary.mitra_profile(
        y, x, f, int(params.get("basepoint", 0)), params.get("n_max"), max_target_distance=cutoff, seed=ctx.seed
    )
    return _mitra_output(profile)


@StepRegistry.register("coned_mitra_profile")
def _coned_mitra(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    source, target = ctx.get(params, "source"), ctx.get(params, "target")
    y, x = ctx.graph(params, "source"), ctx.graph(params, "target")
    f = _vertex_map(ctx, params, source, target, y.vertex_count)
    profile = boundary.coned_mitra_profile(
        y, x, f, ctx.get(params, "sets_source"), ctx.get(params, "sets_target"),
        int(params.get("basepoint", 0)), params.get("n_max"), seed=ctx.seed,
    )
    return _mitra_output(profile)


def _ray(graph: MetricGraph, value: Any) -> Sequence[int]:
    if isinstance(value, dict):
        return metric_core.geodesic(graph, int(value["from"]), int(value["to"])).vertices
    return [int(v) for v in value]


@StepRegistry.register("divergence_profile")
def _divergence(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    g = ctx.graph(params)
    profile = boundary.divergence_profile(g, _ray(g, ctx.get(params, "sequence")), int(params.get("basepoint", 0)))
    table = (["m", "n", "gromov_product"], list(profile.table))
    tail = (["k", "tail_infimum"], list(enumerate(profile.tail_infimum)))
    summary = {"verdict": profile.verdict, "stall_gain": profile.stall_gain, "tail_infimum": profile.tail_infimum}
    return StepOutput(profile, summary, {"products": table, "tail": tail})


@StepRegistry.register("classify_ray")
def _classify(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    cg = ctx.coned(params)
    window, radius = params.get("window"), params.get("radius")
    result = boundary.classify_ray(
        cg,
        _ray(cg.base, ctx.get(params, "ray")),
        parse_rational(window) if window is not None else None,
        parse_rational(radius) if radius is not None else None,
    )
    return StepOutput(result, result)


@StepRegistry.register("limit_projection_growth")
def _projection_growth(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    g = ctx.graph(params)
    table = boundary.limit_projection_growth(g, ctx.get(params, "members"), _ray(g, ctx.get(params, "ray")))
    return StepOutput(table, {"final_diameter": table[-1][1] if table else Fraction(0)}, {"": (["n", "diameter"], table)})


@StepRegistry.register("ct_consistency_probe")
def _ct_probe(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    source, target = ctx.get(params, "source"), ctx.get(params, "target")
    y, x = ctx.graph(params, "source"), ctx.graph(params, "target")
    f = _vertex_map(ctx, params, source, target, y.vertex_count)
    pairs = [(list(a), list(b)) for a, b in ctx.get(params, "pairs")]
    probe = boundary.ct_consistency_probe(y, x, f, pairs, int(params.get("basepoint", 0)))
    table = (["index", "verdict", "asymmetric"], [(r.index, r.verdict, r.asymmetric) for r in probe.rows])
    return StepOutput(probe, probe, {"": table})


@StepRegistry.register("exchange_condition_probe")
def _exchange(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    cg_y, cg_x = ctx.coned(params, "source"), ctx.coned(params, "target")
    f = _vertex_map(ctx, params, cg_y, cg_x, cg_y.base.vertex_count)
    rays = [_ray(cg_y.base, r) for r in ctx.get(params, "rays")]
    window = params.get("window")
    probe = boundary.exchange_condition_probe(cg_y, cg_x, f, rays, parse_rational(window) if window is not None else None)
    table = (
        ["index", "kind_source", "kind_target", "holds"],
        [(r.index, r.in_y.kind, r.in_x.kind, r.holds) for r in probe.rows],
    )
    return StepOutput(probe, probe, {"": table})


@StepRegistry.register("edge_concat_check")
def _edge_concat(ctx: RunContext, params: Dict[str, Any]) -> StepOutput:
    triples = [tuple(int(v) for v in t) for t in ctx.get(params, "triples")]
    verdicts = complex_dev.edge_concat_check(ctx.ball(params, "ball"), triples)
    return StepOutput(verdicts, {"verdicts": verdicts})


# running

_LOADERS = {
    "graph": load_graph,
    "group": load_group,
    "polygon": load_polygon,
    "coned_graph": load_coned_graph,
}


def load_inputs(scenario: Scenario, base_dir: Path) -> Dict[str, Any]:
    """
    Materialize every scenario input.

    Raises:
        SchemaError: If a referenced file is missing or invalid
    """
    values = {}
    for name, spec in scenario.inputs.items():
        source = spec.data if spec.data is not None else base_dir / spec.path
        values[name] = _LOADERS[spec.kind](source)
    return values


def _digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def run_scenario(
    scenario: Scenario,
    out_dir: Path,
    base_dir: Optional[Path] = None,
    seed: Optional[int] = None,
    budget_vertices: Optional[int] = None,
) -> Manifest:
    """
    Run every pipeline step and write its artifacts plus manifest.json.

    Step i writes NN_<id>.json (its summary) and one CSV per table,
    NN_<id>.csv or NN_<id>_<table>.csv. The manifest lists every artifact
    with its sha256 digest; identical inputs and seed give identical bytes.

    Raises:
        ConelabError: From any step; nothing after the failing step runs
    """
    if seed is None:
        seed = scenario.seed if scenario.seed is not None else settings.DEFAULT_SEED
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ctx = RunContext(scenario, out_dir, seed, budget_vertices)
    ctx.values.update(load_inputs(scenario, base_dir or Path.cwd()))
    written: List[Path] = []
    for index, step in enumerate(scenario.pipeline):
        function = StepRegistry.get(step.op)
        logger.info("Step %d: %s (%s)", index, step.name, step.op)
        output = function(ctx, step.params)
        ctx.values[step.name] = output.value
        stem = f"{index:02d}_{step.name}"
        written.append(write_json(out_dir / f"{stem}.json", {"op": step.op, "result": to_jsonable(output.summary)}))
        for suffix, (header, rows) in sorted((output.tables or {}).items()):
            name = f"{stem}.csv" if not suffix else f"{stem}_{suffix}.csv"
            written.append(write_csv(out_dir / name, header, rows))
    artifacts = tuple(
        Artifact(path=p.name, sha256=_digest(p), size=p.stat().st_size) for p in sorted(written, key=lambda p: p.name)
    )
    manifest = Manifest(
        scenario=scenario.name,
        seed=seed,
        steps=tuple(step.name for step in scenario.pipeline),
        artifacts=artifacts,
    )
    write_json(out_dir / "manifest.json", manifest)
    logger.info("Wrote %d artifacts to %s", len(artifacts), out_dir)
    return manifest


def load_scenario(ref: str) -> tuple:
    """
    Scenario from a bundled name (or alias) or a JSON file, with the
    directory its relative input paths resolve against.

    Raises:
        SchemaError: If the file is missing or invalid
    """
    document = bundled_scenario(ref)
    if document is not None:
        return parse_model(Scenario, document, f"scenario {ref}"), Path.cwd()
    path = Path(ref)
    return parse_model(Scenario, read_document(path), str(path)), path.parent
