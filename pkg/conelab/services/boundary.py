"""
Finite-scale boundary diagnostics.

Boundaries are infinite objects and are never materialized here. Each
diagnostic reads a growth curve off a finite ball and attaches a verdict
together with the cutoff that produced it.
"""
import logging
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from conelab.core.config import settings
from conelab.models.boundary import (
    CtProbe,
    CtProbeRow,
    DivergenceProfile,
    ExchangeProbe,
    ExchangeRow,
    MitraProfile,
    RayClass,
)
from conelab.models.electric import ConedGraph
from conelab.models.graph import GeodesicPath, MetricGraph
from conelab.services.electrify import cone_off, sample_pairs
from conelab.services.metric_core import GraphMetric, metric_of, nearest_point_projection
from conelab.utils.errors import EmptySetError, InvalidMapError, InvalidPathError, MembershipError

logger = logging.getLogger(__name__)

RayLike = Union[GeodesicPath, Sequence[int]]


def _vertices(r: RayLike) -> Tuple[int, ...]:
    return tuple(r.vertices) if isinstance(r, GeodesicPath) else tuple(r)


def _tail_infimum(values: Sequence[Fraction]) -> List[Fraction]:
    tail: List[Fraction] = []
    running: Optional[Fraction] = None
    for value in reversed(values):
        running = value if running is None else min(running, value)
        tail.append(running)
    return tail[::-1]


def _stalls(curve: Sequence[Fraction], gain: Fraction) -> bool:
    """Whether a nondecreasing curve gains less than `gain` over its final third."""
    if len(curve) < 2:
        return True
    start = (2 * (len(curve) - 1)) // 3
    return curve[-1] - curve[start] < gain


def divergence_profile(
    g: MetricGraph,
    seq: Sequence[int],
    basepoint: int,
    stall_gain: Optional[Fraction] = None,
) -> DivergenceProfile:
    """
    Gromov products of a sequence and its tail infimum.

    The sequence is judged to diverge when the tail infimum still gains at
    least `stall_gain` over the final third of the table.

    Raises:
        EmptySetError: If the sequence is empty
    """
    if not seq:
        raise EmptySetError("Divergence profile of an empty sequence")
    gain = Fraction(settings.STALL_GAIN) if stall_gain is None else Fraction(stall_gain)
    metric = metric_of(g)
    metric.check(basepoint, *seq)
    base = metric.row(basepoint)
    table = []
    for m, x_m in enumerate(seq):
        row_m = metric.row(x_m)
        for n in range(m + 1):
            x_n = seq[n]
            product = (base[x_m] + base[x_n] - row_m[x_n]) / 2
            table.append((m, n, product))
    # inf over m >= n >= k: the smaller index bounds the tail
    by_smaller: Dict[int, Fraction] = {}
    for m, n, product in table:
        by_smaller[n] = min(by_smaller.get(n, product), product)
    column_min = [by_smaller[n] for n in range(len(seq))]
    tail = _tail_infimum(column_min)
    verdict = "stalled" if _stalls(tail, gain) else "diverging"
    return DivergenceProfile(
        basepoint=basepoint,
        table=tuple(table),
        tail_infimum=tuple(tail),
        verdict=verdict,
        stall_gain=gain,
    )


def _diameter(metric: GraphMetric, points: Sequence[int]) -> Fraction:
    distinct = sorted(set(points))
    return max((metric.d(u, v) for u, v in combinations(distinct, 2)), default=Fraction(0))


def limit_projection_growth(g: MetricGraph, members: Sequence[int], r: RayLike) -> List[Tuple[int, Fraction]]:
    """
    n -> diameter of the nearest-point projections of r[0..n] onto A.

    Raises:
        EmptySetError: If A is empty
    """
    if not list(members):
        raise EmptySetError("Cannot project onto an empty set")
    metric = metric_of(g)
    projected: List[int] = []
    diameter = Fraction(0)
    table = []
    for n, x in enumerate(_vertices(r)):
        p = nearest_point_projection(g, members, x)
        if p not in projected:
            diameter = max([diameter] + [metric.d(p, q) for q in projected])
            projected.append(p)
        table.append((n, diameter))
    return table


def classify_ray(
    cg: ConedGraph, r: RayLike, window: Optional[Fraction] = None, radius: Optional[Fraction] = None
) -> RayClass:
    """
    Horizontal, Vertical(A_i) or Undetermined at the scale of a ray prefix.

    Vertical(i): the projection of r onto A_i has diameter > window while the
    extended diameter of r stays <= window (lowest i wins). Horizontal: the
    extended diameter exceeds the window. The default window is the radius
    divided by CLASSIFY_WINDOW_DIVISOR, rounded down; the radius defaults to
    the base eccentricity of the first vertex of r.

    Raises:
        InvalidPathError: If r is empty or leaves the base graph
    """
    vertices = _vertices(r)
    if not vertices:
        raise InvalidPathError("Ray prefix is empty")
    n = cg.base.vertex_count
    outside = [v for v in vertices if not isinstance(v, int) or not 0 <= v < n]
    if outside:
        raise InvalidPathError(f"Ray prefix leaves the base graph at {outside[:5]}")
    base = metric_of(cg.base)
    if window is None:
        if radius is None:
            radius = max(base.row(vertices[0]))
        window = Fraction(int(radius) // settings.CLASSIFY_WINDOW_DIVISOR)
    window = Fraction(window)
    extended_diameter = _diameter(metric_of(cg.extended), vertices)
    projections = {}
    for coned in cg.coned_sets:
        points = [nearest_point_projection(cg.base, coned.members, x) for x in vertices]
        projections[coned.set_id] = _diameter(base, points)
    kind, set_id = "undetermined", None
    if extended_diameter > window:
        kind = "horizontal"
    else:
        for coned in cg.coned_sets:
            if projections[coned.set_id] > window:
                kind, set_id = "vertical", coned.set_id
                break
    return RayClass(
        kind=kind,
        set_id=set_id,
        window=window,
        extended_diameter=extended_diameter,
        projection_diameters=projections,
    )


def _check_map(y: MetricGraph, x: MetricGraph, f: Sequence[int], injective: bool = True) -> None:
    if len(f) != y.vertex_count:
        raise InvalidMapError(f"Map gives {len(f)} images for {y.vertex_count} vertices")
    target = metric_of(x)
    for v in f:
        if not isinstance(v, int) or not 0 <= v < x.vertex_count:
            raise InvalidMapError(f"Image {v!r} is not a vertex of the target")
    if injective and len(set(f)) != len(f):
        raise InvalidMapError("Vertex map is not injective")
    for u, v, length in y.edges:
        if target.d(f[u], f[v]) > length:
            raise InvalidMapError(f"Edge {u}-{v} of length {length} is stretched by the map")


def _interval_floor(metric: GraphMetric, base: int, pairs: Sequence[Tuple[int, int]]) -> np.ndarray:
    """Scaled min over the interval of each pair of the distance to base."""
    matrix = metric.matrix()
    to_base = matrix[base]
    big = np.iinfo(np.int64).max
    result = np.empty(len(pairs), dtype=np.int64)
    by_source: Dict[int, List[int]] = {}
    for i, (u, _) in enumerate(pairs):
        by_source.setdefault(u, []).append(i)
    for u, indices in by_source.items():
        targets = np.array([pairs[i][1] for i in indices], dtype=np.int64)
        through = matrix[u][:, None] + matrix[:, targets]
        on_interval = through == matrix[u, targets][None, :]
        result[indices] = np.where(on_interval, to_base[:, None], big).min(axis=0)
    return result


def mitra_profile(
    y: MetricGraph,
    x: MetricGraph,
    f: Sequence[int],
    y0: int,
    n_max: Optional[int] = None,
    max_target_distance: Optional[Fraction] = None,
    seed: Optional[int] = None,
    injective: bool = True,
) -> MitraProfile:
    """
    M(N) = min over Y-pairs (u, v) whose Y-interval avoids the open ball
    B_Y(y0, N) of d_X(f(y0), interval_X(f(u), f(v))).

    Pairs include u = v. All pairs are used when there are at most
    PAIR_BUDGET of them, otherwise a seeded sample. Pairs whose images are at
    X-distance >= max_target_distance are dropped. The table runs from N = 0
    to n_max or to the last N that still has a qualifying pair.

    Raises:
        InvalidMapError: If f is not injective or stretches an edge
    """
    _check_map(y, x, f, injective)
    source, target = metric_of(y), metric_of(x)
    source.check(y0)
    n = y.vertex_count
    exhaustive = n * (n + 1) // 2 <= settings.PAIR_BUDGET
    if exhaustive:
        pairs = [(u, u) for u in range(n)] + list(combinations(range(n), 2))
        used_seed = None
    else:
        used_seed = settings.DEFAULT_SEED if seed is None else seed
        pairs = [(u, u) for u in range(n)] + sample_pairs(n, settings.PAIR_BUDGET - n, used_seed)
    if max_target_distance is not None:
        pairs = [(u, v) for u, v in pairs if target.d(f[u], f[v]) < max_target_distance]
    y_floor = _interval_floor(source, y0, pairs)
    x_floor = _interval_floor(target, f[y0], [(f[u], f[v]) for u, v in pairs])
    table = []
    limit = n_max if n_max is not None else int(y_floor.max(initial=0) // source.denominator)
    for big_n in range(limit + 1):
        qualifying = y_floor >= big_n * source.denominator
        if not qualifying.any():
            break
        table.append((big_n, Fraction(int(x_floor[qualifying].min()), target.denominator)))
    logger.debug("Mitra profile over %d pairs: %s", len(pairs), table)
    return MitraProfile(
        basepoint=y0,
        table=tuple(table),
        pair_count=len(pairs),
        exhaustive=exhaustive,
        seed=used_seed,
    )


def _containing_sets(cg_y: ConedGraph, cg_x: ConedGraph, f: Sequence[int]) -> Dict[str, str]:
    """Each A_j of Y goes to the first B_i of X containing its image."""
    chosen = {}
    for coned in cg_y.coned_sets:
        image = {f[v] for v in coned.members}
        home = next((b.set_id for b in cg_x.coned_sets if image <= set(b.members)), None)
        if home is None:
            raise MembershipError(f"Coned set {coned.set_id} of Y lies in no coned set of X")
        chosen[coned.set_id] = home
    return chosen


def coned_mitra_profile(
    y: MetricGraph,
    x: MetricGraph,
    f: Sequence[int],
    sets_y,
    sets_x,
    y0: int,
    n_max: Optional[int] = None,
    seed: Optional[int] = None,
) -> MitraProfile:
    """
    Mitra profile of the coned pair: the cone over A_j maps to the cone over
    the first B_i containing f(A_j).

    Raises:
        MembershipError: If some A_j lies in no B_i
    """
    cg_y = cone_off(y, sets_y, measure=False)
    cg_x = cone_off(x, sets_x, measure=False)
    homes = _containing_sets(cg_y, cg_x, f)
    extended_map = list(f) + [cg_x.cone_vertices[homes[c.set_id]] for c in cg_y.coned_sets]
    _check_map(y, x, f)
    return mitra_profile(cg_y.extended, cg_x.extended, extended_map, y0, n_max, seed=seed, injective=False)


def ct_consistency_probe(
    y: MetricGraph,
    x: MetricGraph,
    f: Sequence[int],
    seq_pairs: Sequence[Tuple[Sequence[int], Sequence[int]]],
    y0: int,
    stall_gain: Optional[Fraction] = None,
) -> CtProbe:
    """
    Mutual Gromov products k -> (a_k.b_k) in Y and of the images in X.

    Both curves are replaced by their tail infima before judging. Verdicts:
    consistent when both diverge, stalled when Y diverges but X stalls,
    inconclusive when Y stalls. `asymmetric` flags curves that disagree.
    """
    gain = Fraction(settings.STALL_GAIN) if stall_gain is None else Fraction(stall_gain)
    _check_map(y, x, f, injective=False)
    source, target = metric_of(y), metric_of(x)
    source.check(y0)
    rows = []
    for index, (first, second) in enumerate(seq_pairs):
        length = min(len(first), len(second))
        source.check(*first[:length], *second[:length])
        y_raw, x_raw = [], []
        for a, b in zip(first[:length], second[:length]):
            y_raw.append((source.d(y0, a) + source.d(y0, b) - source.d(a, b)) / 2)
            fa, fb, fy0 = f[a], f[b], f[y0]
            x_raw.append((target.d(fy0, fa) + target.d(fy0, fb) - target.d(fa, fb)) / 2)
        y_curve, x_curve = _tail_infimum(y_raw), _tail_infimum(x_raw)
        y_div, x_div = not _stalls(y_curve, gain), not _stalls(x_curve, gain)
        if not y_div:
            verdict = "inconclusive"
        else:
            verdict = "consistent" if x_div else "stalled"
        rows.append(CtProbeRow(
            index=index,
            y_curve=tuple(y_curve),
            x_curve=tuple(x_curve),
            verdict=verdict,
            asymmetric=y_div != x_div,
        ))
    return CtProbe(rows=tuple(rows), stall_gain=gain)


def exchange_condition_probe(
    cg_y: ConedGraph,
    cg_x: ConedGraph,
    f: Sequence[int],
    rays: Sequence[RayLike],
    window: Optional[Fraction] = None,
) -> ExchangeProbe:
    """
    Classify each Y-ray in Y and its image in X. Where the image is vertical
    for some B_i, the ray should be vertical for some A_j in Y.
    """
    _check_map(cg_y.base, cg_x.base, f, injective=False)
    rows = []
    for index, ray in enumerate(rays):
        vertices = _vertices(ray)
        in_y = classify_ray(cg_y, vertices, window)
        in_x = classify_ray(cg_x, [f[v] for v in vertices], window if window is not None else in_y.window)
        holds = in_y.kind == "vertical" if in_x.kind == "vertical" else None
        rows.append(ExchangeRow(index=index, in_y=in_y, in_x=in_x, holds=holds))
    return ExchangeProbe(rows=tuple(rows))
