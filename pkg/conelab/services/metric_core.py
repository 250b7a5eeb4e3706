"""
Exact metric geometry of finite weighted graphs.

All distances are Fractions; networkx does the shortest-path work and numpy
scans quadruples on integer-scaled distance matrices, so nothing here ever
touches floating point.
"""
import logging
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np

from conelab.core.config import settings
from conelab.models.graph import DeltaReport, DottedPath, GeodesicPath, GraphDiagnostics, MetricGraph, QuasiParams
from conelab.utils.errors import (
    BudgetExceededError,
    EmptySetError,
    InvalidGraphError,
    InvalidPathError,
    SchemaError,
    UnknownVertexError,
)
from conelab.utils.rational import ceil_to_denominator, common_denominator

logger = logging.getLogger(__name__)

PathLike = Union[GeodesicPath, DottedPath, Sequence[int]]


class GraphMetric:
    """Distance oracle over one MetricGraph with cached single-source rows."""

    def __init__(self, graph: MetricGraph):
        self.graph = graph
        self.n = graph.vertex_count
        self.adjacency = graph.neighbors()
        self.unit = graph.is_unit
        self.nx_graph = nx.Graph()
        self.nx_graph.add_nodes_from(range(self.n))
        for u, v, length in graph.edges:
            self.nx_graph.add_edge(u, v, length=length)
        self.denominator = common_denominator(length for _, _, length in graph.edges)
        self._rows: Dict[int, List[Fraction]] = {}
        self._matrix: Optional[np.ndarray] = None

    def check(self, *vertices: int) -> None:
        for v in vertices:
            if not isinstance(v, int) or not 0 <= v < self.n:
                raise UnknownVertexError(f"Unknown vertex id {v!r} (graph has {self.n} vertices)")

    def row(self, source: int) -> List[Fraction]:
        """Distances from source to every vertex."""
        cached = self._rows.get(source)
        if cached is not None:
            return cached
        self.check(source)
        if self.unit:
            lengths = nx.single_source_shortest_path_length(self.nx_graph, source)
        else:
            lengths = nx.single_source_dijkstra_path_length(self.nx_graph, source, weight="length")
        row = [Fraction(lengths[v]) for v in range(self.n)]
        self._rows[source] = row
        return row

    def d(self, u: int, v: int) -> Fraction:
        return self.row(u)[v]

    def matrix(self) -> np.ndarray:
        """All-pairs distances scaled by the common denominator, as int64."""
        if self._matrix is None:
            den = self.denominator
            self._matrix = np.array(
                [[int(value * den) for value in self.row(s)] for s in range(self.n)],
                dtype=np.int64,
            ).reshape(self.n, self.n)
        return self._matrix

    def to_set(self, members: Iterable[int]) -> List[Fraction]:
        """Distance from every vertex to the nearest member."""
        sources = sorted(set(members))
        if not sources:
            raise EmptySetError("Vertex set is empty")
        self.check(*sources)
        lengths = nx.multi_source_dijkstra_path_length(self.nx_graph, sources, weight="length")
        return [Fraction(lengths[v]) for v in range(self.n)]


def metric_of(g: MetricGraph) -> GraphMetric:
    """
    Distance oracle for g, built once and cached on the graph.

    Raises:
        InvalidGraphError: If g has no vertices, a self-loop, a nonpositive
            length, an out-of-range endpoint, or is disconnected
    """
    metric = g._metric
    if metric is None:
        report = validate(g)
        if g.vertex_count == 0:
            raise InvalidGraphError("Graph has no vertices")
        if not report.ok:
            raise InvalidGraphError(
                f"Graph is not a connected positive-length graph: components={report.component_count}, "
                f"self_loops={list(report.self_loops)}, weight_violations={len(report.weight_violations)}, "
                f"out_of_range={list(report.out_of_range)}"
            )
        metric = GraphMetric(g)
        g._metric = metric
    return metric


def validate(g: MetricGraph) -> GraphDiagnostics:
    """
    Report connectivity, component count and weight sanity; never raises.

    Args:
        g: Graph to inspect

    Returns:
        GraphDiagnostics with every violation listed
    """
    n = g.vertex_count
    loops = tuple((u, v) for u, v, _ in g.edges if u == v)
    bad_weights = tuple(edge for edge in g.edges if edge[2] <= 0)
    out_of_range = tuple((u, v) for u, v, _ in g.edges if not (0 <= u < n and 0 <= v < n))
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from((u, v) for u, v, _ in g.edges if 0 <= u < n and 0 <= v < n and u != v)
    components = nx.number_connected_components(graph) if n else 0
    return GraphDiagnostics(
        vertex_count=n,
        edge_count=len(g.edges),
        connected=components == 1,
        component_count=components,
        self_loops=loops,
        weight_violations=bad_weights,
        out_of_range=out_of_range,
    )


def distance(g: MetricGraph, u: int, v: int) -> Fraction:
    """Exact shortest-path length between u and v."""
    metric = metric_of(g)
    metric.check(u, v)
    return metric.d(u, v)


def geodesic(g: MetricGraph, u: int, v: int) -> GeodesicPath:
    """
    The lexicographically smallest shortest path from u to v.

    Walks from u, always stepping to the lowest-id neighbor that stays on a
    shortest path to v.
    """
    metric = metric_of(g)
    metric.check(u, v)
    to_v = metric.row(v)
    path = [u]
    current = u
    while current != v:
        current = min(
            w for w, length in metric.adjacency[current].items()
            if length + to_v[w] == to_v[current]
        )
        path.append(current)
    return GeodesicPath(vertices=tuple(path), total_length=to_v[u])


def interval(g: MetricGraph, u: int, v: int) -> FrozenSet[int]:
    """Vertices lying on at least one geodesic from u to v."""
    metric = metric_of(g)
    metric.check(u, v)
    return _interval(metric, u, v)


def _interval(metric: GraphMetric, u: int, v: int) -> FrozenSet[int]:
    row_u, row_v = metric.row(u), metric.row(v)
    total = row_u[v]
    return frozenset(w for w in range(metric.n) if row_u[w] + row_v[w] == total)


def all_geodesics(g: MetricGraph, u: int, v: int) -> List[Tuple[int, ...]]:
    """Every geodesic from u to v, sorted; exponential in general, for small graphs."""
    metric = metric_of(g)
    metric.check(u, v)
    paths = nx.all_shortest_paths(metric.nx_graph, u, v, weight="length")
    return sorted(tuple(path) for path in paths)


def gromov_product(g: MetricGraph, base: int, a: int, b: int) -> Fraction:
    """(a.b)_base = (d(base,a) + d(base,b) - d(a,b)) / 2."""
    metric = metric_of(g)
    metric.check(base, a, b)
    row = metric.row(base)
    return (row[a] + row[b] - metric.d(a, b)) / 2


def delta_four_point(
    g: MetricGraph,
    mode: str = "exhaustive",
    count: Optional[int] = None,
    seed: Optional[int] = None,
    budget: Optional[int] = None,
) -> DeltaReport:
    """
    Four-point hyperbolicity constant.

    For a quadruple with pair sums L >= M >= S the quadruple contributes
    (L - M) / 2; the constant is the maximum over quadruples.

    Args:
        g: Connected graph
        mode: "exhaustive", "sampled" or "auto" (exhaustive within budget)
        count: Quadruples drawn in sampled mode
        seed: Sampling seed (defaults to settings.DEFAULT_SEED)
        budget: Vertex cap for exhaustive mode

    Returns:
        DeltaReport carrying the value and the maximizing quadruple

    Raises:
        BudgetExceededError: If exhaustive mode is requested above the budget
    """
    metric = metric_of(g)
    budget = settings.DELTA_EXHAUSTIVE_BUDGET if budget is None else budget
    if mode == "auto":
        mode = "exhaustive" if metric.n <= budget else "sampled"
    if mode == "exhaustive":
        if metric.n > budget:
            raise BudgetExceededError(
                f"Exhaustive four-point scan refuses {metric.n} vertices (budget {budget})"
            )
        return _four_point_exhaustive(metric)
    if mode == "sampled":
        seed = settings.DEFAULT_SEED if seed is None else seed
        count = settings.DELTA_SAMPLE_COUNT if count is None else count
        return _four_point_sampled(metric, count, seed)
    raise SchemaError(f"Unknown delta mode: {mode!r}")


def _four_point_exhaustive(metric: GraphMetric) -> DeltaReport:
    matrix = metric.matrix()
    n = metric.n
    best = 0
    certificate: Optional[Tuple[int, ...]] = None
    examined = 0
    # Quadruples with a repeated point contribute 0; scan x < y < {z, w}
    for x in range(n):
        for y in range(x + 1, n - 2):
            tail = matrix[y + 1:, y + 1:]
            from_x = matrix[x, y + 1:]
            from_y = matrix[y, y + 1:]
            s1 = matrix[x, y] + tail
            s2 = from_x[:, None] + from_y[None, :]
            s3 = from_y[:, None] + from_x[None, :]
            high = np.maximum(np.maximum(s1, s2), s3)
            low = np.minimum(np.minimum(s1, s2), s3)
            gap = 2 * high - (s1 + s2 + s3 - low)
            examined += tail.shape[0] * (tail.shape[0] - 1) // 2
            flat = int(gap.argmax())
            value = int(gap.flat[flat])
            if value > best:
                i, j = divmod(flat, tail.shape[1])
                best = value
                certificate = (x, y, y + 1 + i, y + 1 + j)
    value = Fraction(best, 2 * metric.denominator)
    logger.debug("four-point delta %s over %d vertices", value, n)
    return DeltaReport(
        value=value,
        mode="exhaustive",
        vertex_count=n,
        quadruples=examined,
        certificate=certificate,
    )


def _four_point_sampled(metric: GraphMetric, count: int, seed: int) -> DeltaReport:
    matrix = metric.matrix()
    rng = np.random.default_rng(seed)
    quads = rng.integers(0, metric.n, size=(max(count, 1), 4))
    x, y, z, w = quads.T
    s1 = matrix[x, y] + matrix[z, w]
    s2 = matrix[x, z] + matrix[y, w]
    s3 = matrix[x, w] + matrix[y, z]
    stacked = np.sort(np.stack([s1, s2, s3]), axis=0)
    gap = stacked[2] - stacked[1]
    index = int(gap.argmax())
    value = Fraction(int(gap[index]), 2 * metric.denominator)
    return DeltaReport(
        value=value,
        mode="sampled",
        vertex_count=metric.n,
        quadruples=int(quads.shape[0]),
        certificate=tuple(int(v) for v in quads[index]),
        seed=seed,
    )


def _farthest_geodesic(metric: GraphMetric, a: int, b: int) -> List[Fraction]:
    """
    For every vertex p, the max over geodesics from a to b of d(p, geodesic).

    Bottleneck DP over the interval DAG ordered by distance from a.
    """
    row_a = metric.row(a)
    member_set = _interval(metric, a, b)
    members = sorted(member_set, key=lambda w: (row_a[w], w))
    predecessors = {
        w: [q for q, length in metric.adjacency[w].items() if q in member_set and row_a[q] + length == row_a[w]]
        for w in members
    }
    result: List[Fraction] = []
    for p in range(metric.n):
        row_p = metric.row(p)
        best: Dict[int, Fraction] = {}
        for w in members:
            if w == a:
                best[w] = row_p[a]
            else:
                best[w] = min(row_p[w], max(best[q] for q in predecessors[w]))
        result.append(best[b])
    return result


def slim_triangle_constant(g: MetricGraph, budget: Optional[int] = None) -> Fraction:
    """
    Exact slim-triangle constant over all vertex triples and all geodesics.

    Raises:
        BudgetExceededError: Above settings.SLIM_BRUTE_FORCE_BUDGET vertices
    """
    metric = metric_of(g)
    budget = settings.SLIM_BRUTE_FORCE_BUDGET if budget is None else budget
    if metric.n > budget:
        raise BudgetExceededError(f"Slim-triangle brute force refuses {metric.n} vertices (budget {budget})")
    n = metric.n
    farthest: Dict[Tuple[int, int], List[Fraction]] = {}
    for a in range(n):
        for b in range(n):
            farthest[(a, b)] = _farthest_geodesic(metric, a, b) if a <= b else farthest[(b, a)]
    best = Fraction(0)
    for u in range(n):
        for v in range(n):
            side = _interval(metric, u, v)
            for w in range(n):
                to_uw, to_vw = farthest[(u, w)], farthest[(v, w)]
                for p in side:
                    value = min(to_uw[p], to_vw[p])
                    if value > best:
                        best = value
    return best


def polygon_slimness(g: MetricGraph, corners: Sequence[int]) -> Fraction:
    """
    Max over sides and their points of the distance to the union of the other sides.

    Sides are the tie-break geodesics between consecutive corners.
    """
    if len(corners) < 3:
        raise SchemaError(f"A polygon needs at least 3 corners, got {len(corners)}")
    metric = metric_of(g)
    metric.check(*corners)
    count = len(corners)
    sides = [geodesic(g, corners[i], corners[(i + 1) % count]).vertices for i in range(count)]
    best = Fraction(0)
    for i, side in enumerate(sides):
        others = {v for j, other in enumerate(sides) if j != i for v in other}
        for p in side:
            row = metric.row(p)
            value = min(row[q] for q in others)
            if value > best:
                best = value
    return best


def quasiconvexity_constant(g: MetricGraph, members: Iterable[int]) -> Fraction:
    """
    K = max over a, a' in A and w in interval(a, a') of d(w, A).

    Since the interval is the union of all geodesics, K bounds every geodesic
    between points of A.
    """
    metric = metric_of(g)
    subset = sorted(set(members))
    if not subset:
        raise EmptySetError("Quasiconvexity of an empty set is undefined")
    metric.check(*subset)
    if len(subset) == metric.n:
        return Fraction(0)
    to_set = metric.to_set(subset)
    best = Fraction(0)
    for a, b in combinations(subset, 2):
        for w in _interval(metric, a, b):
            if to_set[w] > best:
                best = to_set[w]
    return best


def union_quasiconvexity(g: MetricGraph, sets: Sequence[Iterable[int]]) -> Tuple[List[Fraction], Fraction]:
    """Quasiconvexity constants of each set and of their union."""
    materialized = [sorted(set(s)) for s in sets]
    per_set = [quasiconvexity_constant(g, s) for s in materialized]
    union = quasiconvexity_constant(g, {v for s in materialized for v in s})
    return per_set, union


def hausdorff_distance(g: MetricGraph, first: Iterable[int], second: Iterable[int]) -> Fraction:
    """Exact Hausdorff distance between two vertex sets."""
    metric = metric_of(g)
    left, right = sorted(set(first)), sorted(set(second))
    if not left or not right:
        raise EmptySetError("Hausdorff distance needs two nonempty sets")
    to_right = metric.to_set(right)
    to_left = metric.to_set(left)
    return max(max(to_right[v] for v in left), max(to_left[v] for v in right))


def nearest_point_projection(g: MetricGraph, members: Iterable[int], x: int) -> int:
    """Point of A nearest to x; ties go to the lowest vertex id."""
    metric = metric_of(g)
    subset = sorted(set(members))
    if not subset:
        raise EmptySetError("Cannot project onto an empty set")
    metric.check(x, *subset)
    row = metric.row(x)
    return min(subset, key=lambda a: (row[a], a))


def fit_quasi_params(
    pairs: Iterable[Tuple[Fraction, Fraction]],
    cap: Fraction,
    lattice: Optional[Sequence[Fraction]] = None,
    max_denominator: Optional[int] = None,
) -> QuasiParams:
    """
    Minimal (lambda, eps) on the search lattice for source/target distance pairs.

    Each pair (s, t) must satisfy s / lambda - eps <= t <= lambda * s + eps.
    Lambda is minimized first, then eps; eps is searched over rationals with
    bounded denominator up to cap. When no lattice lambda fits under the cap,
    lambda = 1 is reported with its own eps and the fallback flag set.

    Args:
        pairs: (source distance, target distance) pairs
        cap: Largest eps considered
        lattice: Lambda candidates, defaults to settings
        max_denominator: Largest eps denominator, defaults to settings

    Returns:
        QuasiParams
    """
    pairs = list(pairs)
    lattice = list(lattice) if lattice is not None else settings.get_lambda_lattice()
    max_denominator = max_denominator or settings.QUASI_EPS_MAX_DENOMINATOR
    if not pairs:
        return QuasiParams(lam=Fraction(1), eps=Fraction(0), pair_count=0)

    def required(lam: Fraction) -> Fraction:
        need = max(max(s / lam - t, t - lam * s) for s, t in pairs)
        return ceil_to_denominator(max(need, Fraction(0)), max_denominator)

    for lam in lattice:
        eps = required(lam)
        if eps <= cap:
            return QuasiParams(lam=lam, eps=eps, pair_count=len(pairs))
    return QuasiParams(lam=Fraction(1), eps=required(Fraction(1)), pair_count=len(pairs), fallback=True)


def _path_vertices(path: PathLike) -> Tuple[Tuple[int, ...], Optional[Fraction], bool]:
    if isinstance(path, GeodesicPath):
        return path.vertices, None, True
    if isinstance(path, DottedPath):
        return path.vertices, path.step_bound, False
    return tuple(path), None, False


def check_path(g: MetricGraph, path: PathLike) -> Tuple[int, ...]:
    """
    Validate a path against g.

    GeodesicPaths must walk edges and realize the endpoint distance; dotted
    paths must respect their step bound.

    Raises:
        InvalidPathError: On any violation
    """
    metric = metric_of(g)
    vertices, step_bound, is_geodesic = _path_vertices(path)
    if not vertices:
        raise InvalidPathError("Path is empty")
    for v in vertices:
        if not isinstance(v, int) or not 0 <= v < metric.n:
            raise InvalidPathError(f"Path leaves the graph at {v!r}")
    if is_geodesic:
        walked = Fraction(0)
        for u, v in zip(vertices, vertices[1:]):
            if v not in metric.adjacency[u]:
                raise InvalidPathError(f"Vertices {u} and {v} are not adjacent")
            walked += metric.adjacency[u][v]
        if walked != metric.d(vertices[0], vertices[-1]) or walked != path.total_length:
            raise InvalidPathError("Path length does not match the endpoint distance")
    elif step_bound is not None:
        for u, v in zip(vertices, vertices[1:]):
            if metric.d(u, v) > step_bound:
                raise InvalidPathError(f"Step {u}->{v} exceeds the step bound {step_bound}")
    return vertices


def measure_quasigeodesic(g: MetricGraph, path: PathLike) -> QuasiParams:
    """
    Minimal lattice (lambda, eps) for the index parameterization of a path.

    Compares |i - j| with d(p_i, p_j) over every index pair; eps is capped at
    the largest distance between path vertices.
    """
    metric = metric_of(g)
    vertices = check_path(g, path)
    pairs: List[Tuple[Fraction, Fraction]] = []
    diameter = Fraction(0)
    for i in range(len(vertices)):
        row = metric.row(vertices[i])
        for j in range(i + 1, len(vertices)):
            t = row[vertices[j]]
            diameter = max(diameter, t)
            pairs.append((Fraction(j - i), t))
    return fit_quasi_params(pairs, cap=diameter)
