"""
Cone-off construction and the measurements built on it.

Every coned set A gets a fresh cone vertex c joined to each point of A by an
edge of length exactly 1, so two points of A are at extended distance <= 2.
"""
import logging
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from conelab.core.config import settings
from conelab.models.electric import (
    ConeComparison,
    ConedGraph,
    ConedSet,
    ConeMetadata,
    DivergenceBoundRow,
    ElectricPath,
    FellowTravelRow,
    LengthBoundRow,
    LocalFinitenessRow,
)
from conelab.models.graph import DottedPath, GeodesicPath, MetricGraph
from conelab.services.metric_core import (
    delta_four_point,
    fit_quasi_params,
    geodesic,
    hausdorff_distance,
    metric_of,
    nearest_point_projection,
    quasiconvexity_constant,
)
from conelab.utils.errors import EmptySetError, InvalidPathError, MembershipError, SchemaError, UnknownVertexError

logger = logging.getLogger(__name__)

SetFamily = Union[Mapping[str, Iterable[int]], Sequence[Iterable[int]]]


def normalize_sets(g: MetricGraph, sets: SetFamily) -> List[ConedSet]:
    """
    Turn a set family into ConedSets with ids.

    Sequences get ids A0, A1, ...; mappings keep their keys in order.

    Raises:
        EmptySetError: If a set is empty
        UnknownVertexError: If a member is outside g
    """
    if isinstance(sets, Mapping):
        items = [(str(key), members) for key, members in sets.items()]
    else:
        items = [(f"A{index}", members) for index, members in enumerate(sets)]
    result = []
    for set_id, members in items:
        ordered = tuple(sorted(set(members)))
        if not ordered:
            raise EmptySetError(f"Coned set {set_id} is empty")
        for v in ordered:
            if not isinstance(v, int) or not 0 <= v < g.vertex_count:
                raise UnknownVertexError(f"Coned set {set_id} contains unknown vertex {v!r}")
        result.append(ConedSet(id=set_id, members=ordered))
    return result


def sample_pairs(n: int, limit: int, seed: int) -> List[Tuple[int, int]]:
    """All pairs u < v, or a seeded sample of `limit` of them."""
    total = n * (n - 1) // 2
    if total <= limit:
        return list(combinations(range(n), 2))
    rng = np.random.default_rng(seed)
    chosen = set()
    while len(chosen) < limit:
        u, v = (int(x) for x in rng.integers(0, n, size=2))
        if u != v:
            chosen.add((min(u, v), max(u, v)))
    return sorted(chosen)


def cone_off(
    g: MetricGraph,
    sets: SetFamily,
    measure: bool = True,
    seed: Optional[int] = None,
    delta_budget: Optional[int] = None,
) -> ConedGraph:
    """
    Build the coned-off graph.

    Args:
        g: Connected base graph
        sets: Vertex sets to cone, as a list or an id -> set mapping
        measure: Record delta of the base, k0 and lambda0 as metadata
        seed: Seed for sampled delta and lambda0 calibration
        delta_budget: Vertex cap for the exhaustive delta scan

    Returns:
        ConedGraph
    """
    metric_of(g)
    coned = normalize_sets(g, sets)
    n = g.vertex_count
    edges = list(g.edges)
    labels = dict(g.labels)
    cone_vertices: Dict[str, int] = {}
    for index, coned_set in enumerate(coned):
        cone = n + index
        cone_vertices[coned_set.set_id] = cone
        labels[cone] = f"cone:{coned_set.set_id}"
        edges.extend((a, cone, 1) for a in coned_set.members)
    extended = MetricGraph(vertices=n + len(coned), edges=edges, labels=labels)
    result = ConedGraph(base=g, cones=tuple(coned), cone_vertices=cone_vertices, extended=extended)
    if not measure:
        return result
    seed = settings.DEFAULT_SEED if seed is None else seed
    delta = delta_four_point(g, mode="auto", seed=seed, budget=delta_budget)
    k0 = max((quasiconvexity_constant(g, c.members) for c in coned), default=Fraction(0))
    pairs = sample_pairs(n, settings.CALIBRATION_PAIRS, seed)
    lambda0 = Fraction(0)
    for u, v in pairs:
        dotted = de_electrify(result, geodesic(extended, u, v).vertices)
        lambda0 = max(lambda0, dotted.step_bound)
    logger.debug("cone-off of %d sets: delta=%s k0=%s lambda0=%s", len(coned), delta.value, k0, lambda0)
    metadata = ConeMetadata(delta=delta, k0=k0, lambda0=lambda0, calibration_pairs=len(pairs), seed=seed)
    return result.model_copy(update={"metadata": metadata})


def electric_path(cg: ConedGraph, set_id: str, x: int, x_prime: int) -> ElectricPath:
    """The length-2 path x - c - x' through the cone vertex of set_id."""
    if set_id not in cg.cone_vertices:
        raise SchemaError(f"Unknown coned set: {set_id}")
    members = cg.members(set_id)
    for v in (x, x_prime):
        if v not in members:
            raise MembershipError(f"Vertex {v} is not in coned set {set_id}")
    cone = cg.cone_vertices[set_id]
    return ElectricPath(set_id=set_id, x=x, x_prime=x_prime, vertices=(x, cone, x_prime), length=Fraction(2))


def de_electrify(cg: ConedGraph, path: Union[GeodesicPath, Sequence[int]]) -> DottedPath:
    """
    Replace every cone visit x - c - x' by a dotted path inside the coned set.

    The replacement projects the tie-break base geodesic from x to x' onto the
    set, vertex by vertex. Base subpaths are kept verbatim.

    Raises:
        InvalidPathError: If the path is not a walk in the extended graph or
            starts/ends at a cone vertex
    """
    vertices = list(path.vertices if isinstance(path, GeodesicPath) else path)
    if not vertices:
        raise InvalidPathError("Path is empty")
    extended = metric_of(cg.extended)
    for v in vertices:
        if not isinstance(v, int) or not 0 <= v < cg.extended.vertex_count:
            raise InvalidPathError(f"Path leaves the extended graph at {v!r}")
    for u, v in zip(vertices, vertices[1:]):
        if v not in extended.adjacency[u]:
            raise InvalidPathError(f"Vertices {u} and {v} are not adjacent in the extended graph")
    if cg.is_cone(vertices[0]) or cg.is_cone(vertices[-1]):
        raise InvalidPathError("De-electrification needs endpoints in the base graph")

    output = [vertices[0]]
    index = 1
    while index < len(vertices):
        vertex = vertices[index]
        if not cg.is_cone(vertex):
            output.append(vertex)
            index += 1
            continue
        entry, exit_ = vertices[index - 1], vertices[index + 1]
        if cg.is_cone(exit_):
            raise InvalidPathError("Consecutive cone vertices")
        members = cg.members(cg.set_of_cone(vertex))
        segment = geodesic(cg.base, entry, exit_).vertices
        output.extend(nearest_point_projection(cg.base, members, w) for w in segment[1:])
        index += 2

    base = metric_of(cg.base)
    step_bound = max((base.d(u, v) for u, v in zip(output, output[1:])), default=Fraction(0))
    return DottedPath(vertices=tuple(output), step_bound=step_bound)


def compare_cone_offs(
    g: MetricGraph,
    sets_a: SetFamily,
    sets_b: SetFamily,
    seed: Optional[int] = None,
) -> ConeComparison:
    """
    Measure the identity-on-base map between two cone-offs of g.

    Raises:
        SchemaError: If the two families are not indexed by the same ids
    """
    family_a = normalize_sets(g, sets_a)
    family_b = normalize_sets(g, sets_b)
    ids_a = [c.set_id for c in family_a]
    ids_b = [c.set_id for c in family_b]
    if sorted(ids_a) != sorted(ids_b):
        raise SchemaError(f"Set families are indexed differently: {ids_a} vs {ids_b}")
    by_id_b = {c.set_id: c for c in family_b}
    bound = max(
        (hausdorff_distance(g, c.members, by_id_b[c.set_id].members) for c in family_a),
        default=Fraction(0),
    )
    first = cone_off(g, {c.set_id: c.members for c in family_a}, measure=False)
    second = cone_off(g, {c.set_id: c.members for c in family_b}, measure=False)
    metric_a, metric_b = metric_of(first.extended), metric_of(second.extended)
    seed = settings.DEFAULT_SEED if seed is None else seed
    pairs = []
    for u, v in sample_pairs(g.vertex_count, settings.PAIR_BUDGET, seed):
        pairs.append((metric_a.d(u, v), metric_b.d(u, v)))
    cap = max((s for s, _ in pairs), default=Fraction(0))
    return ConeComparison(hausdorff_bound=bound, params=fit_quasi_params(pairs, cap=cap))


def fellow_travel_stats(
    cg: ConedGraph,
    pairs: Optional[Iterable[Tuple[int, int]]] = None,
) -> List[FellowTravelRow]:
    """
    Extended-metric Hausdorff distance between base and extended geodesics.

    Args:
        cg: Coned graph
        pairs: Base vertex pairs; all pairs u < v when omitted

    Returns:
        One row per pair, in input order
    """
    if pairs is None:
        pairs = combinations(range(cg.base.vertex_count), 2)
    base, extended = metric_of(cg.base), metric_of(cg.extended)
    rows = []
    for u, v in pairs:
        base.check(u, v)
        alpha = geodesic(cg.base, u, v).vertices
        beta = geodesic(cg.extended, u, v).vertices
        rows.append(
            FellowTravelRow(
                u=u,
                v=v,
                d_base=base.d(u, v),
                d_extended=extended.d(u, v),
                hausdorff=hausdorff_distance(cg.extended, alpha, beta),
            )
        )
    return rows


def attach_horoballs(g: MetricGraph, sets: SetFamily, depth: int) -> MetricGraph:
    """
    Attach a truncated combinatorial horoball to every set.

    Layer k of the horoball over A holds one copy of each a in A; copies are
    stacked by unit vertical edges and, at layer k >= 1, (a, k) and (b, k)
    are joined when d(a, b) <= 2^k. Layer 0 is A itself.

    Raises:
        SchemaError: If depth < 1
    """
    if depth < 1:
        raise SchemaError(f"Horoball depth must be >= 1, got {depth}")
    metric = metric_of(g)
    family = normalize_sets(g, sets)
    edges = list(g.edges)
    labels = dict(g.labels)
    next_id = g.vertex_count
    for coned_set in family:
        layer_below = {a: a for a in coned_set.members}
        for k in range(1, depth + 1):
            layer = {}
            for a in coned_set.members:
                layer[a] = next_id
                labels[next_id] = f"{coned_set.set_id}:{a}@{k}"
                edges.append((layer_below[a], next_id, 1))
                next_id += 1
            threshold = 2 ** k
            for a, b in combinations(coned_set.members, 2):
                if metric.d(a, b) <= threshold:
                    edges.append((layer[a], layer[b], 1))
            layer_below = layer
    return MetricGraph(
        vertices=next_id,
        edges=edges,
        labels=labels,
        metadata={"layers": str(depth)},
    )


def de_electrification_profile(
    cg: ConedGraph,
    max_length: int,
    seed: Optional[int] = None,
    pair_limit: Optional[int] = None,
) -> List[LengthBoundRow]:
    """
    Quasiconvexity in the base of de-electrified extended geodesics.

    Row l reports the max constant over pairs at extended distance <= l.
    """
    extended = metric_of(cg.extended)
    seed = settings.DEFAULT_SEED if seed is None else seed
    limit = settings.PAIR_BUDGET if pair_limit is None else pair_limit
    measured: List[Tuple[Fraction, Fraction]] = []
    for u, v in sample_pairs(cg.base.vertex_count, limit, seed):
        length = extended.d(u, v)
        if length > max_length:
            continue
        dotted = de_electrify(cg, geodesic(cg.extended, u, v).vertices)
        measured.append((length, quasiconvexity_constant(cg.base, dotted.vertices)))
    rows = []
    for bound in range(max_length + 1):
        within = [k for length, k in measured if length <= bound]
        rows.append(
            LengthBoundRow(length=Fraction(bound), paths=len(within), max_constant=max(within, default=Fraction(0)))
        )
    return rows


def local_finiteness_profile(
    g: MetricGraph,
    sets: SetFamily,
    center: int,
    radii: Iterable[int],
) -> List[LocalFinitenessRow]:
    """Number of sets meeting the ball B(center, R) for each R."""
    metric = metric_of(g)
    metric.check(center)
    row = metric.row(center)
    reach = [min(row[a] for a in coned.members) for coned in normalize_sets(g, sets)]
    return [
        LocalFinitenessRow(radius=Fraction(r), sets_met=sum(1 for d in reach if d <= r))
        for r in sorted(set(radii))
    ]


def electric_divergence_profile(
    cg: ConedGraph,
    max_distance: int,
    triples: Optional[Iterable[Tuple[int, int, int]]] = None,
    samples: int = 500,
    seed: Optional[int] = None,
) -> Tuple[List[DivergenceBoundRow], List[Tuple[int, int]]]:
    """
    Base distance to base geodesics against extended distance to extended geodesics.

    Args:
        cg: Coned graph
        max_distance: Largest extended distance D tabulated
        triples: (x0, x, y) triples; seeded sample when omitted
        samples: Sample size when triples are omitted
        seed: Sampling seed

    Returns:
        (rows D -> D'(D), base pairs with d_extended > d_base); the second list
        is always empty for a genuine cone-off
    """
    base, extended = metric_of(cg.base), metric_of(cg.extended)
    n = cg.base.vertex_count
    if triples is None:
        rng = np.random.default_rng(settings.DEFAULT_SEED if seed is None else seed)
        triples = [tuple(int(x) for x in rng.integers(0, n, size=3)) for _ in range(samples)]
    observed = []
    for x0, x, y in triples:
        base.check(x0, x, y)
        row_base, row_extended = base.row(x0), extended.row(x0)
        to_base = min(row_base[w] for w in geodesic(cg.base, x, y).vertices)
        to_extended = min(row_extended[w] for w in geodesic(cg.extended, x, y).vertices)
        observed.append((to_extended, to_base))
    rows = []
    for bound in range(max_distance + 1):
        qualifying = [b for e, b in observed if e >= bound]
        rows.append(
            DivergenceBoundRow(
                extended_distance=Fraction(bound),
                triples=len(qualifying),
                min_base_distance=min(qualifying) if qualifying else None,
            )
        )
    violations = [
        (u, v) for u, v in combinations(range(n), 2) if extended.d(u, v) > base.d(u, v)
    ]
    return rows, violations
