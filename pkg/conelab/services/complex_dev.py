"""
Complexes of groups over polygons: fundamental groups, developments and the
comparisons between developments, Bass-Serre trees and coned-off Cayley graphs.

Vertices of a development are cosets gG_v, edges are cosets gG_e joining
gG_v and gG_w, faces are cosets gG_F. A finite piece is read off from the
elements g of a word-length ball of the fundamental group.
"""
import logging
from collections import defaultdict
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from networkx.utils import UnionFind

from conelab.core.config import settings
from conelab.engines import BaseWordEngine, Letters, get_engine
from conelab.engines.providers import CyclicFreeProductEngine, SemidirectEngine
from conelab.models.boundary import PropernessProfile
from conelab.models.complex import (
    AcylindricityProbe,
    ComplexEdge,
    DevelopmentBall,
    DevelopmentComparison,
    EdgeConcatVerdict,
    EmbeddingProfile,
    EmbeddingRow,
    FamilyProfile,
    FamilyRow,
    FundamentalGroup,
    IntersectionCheck,
    LocalMapCheck,
    PolygonOfGroups,
    RegistryEntry,
    StabilizerRow,
)
from conelab.models.graph import MetricGraph
from conelab.models.group import GroupScenario, SubgroupSpec, format_letters
from conelab.services.electrify import cone_off, sample_pairs
from conelab.services.group_words import CosetIndex, assign_cosets, cayley_ball, enumerate_ball, to_letters
from conelab.services.metric_core import fit_quasi_params, metric_of
from conelab.utils.errors import (
    InvalidPathError,
    InvariantBreachError,
    SchemaError,
    UnmatchedCosetError,
    UnsupportedPatternError,
)

logger = logging.getLogger(__name__)

EdgeSpec = Tuple[str, str, str, SubgroupSpec]


def _single_generator(engine: BaseWordEngine, word: str, where: str) -> str:
    """The generator a local map sends a generator to; other images are unsupported."""
    letters = engine.reduce(engine.parse(word))
    if len(letters) != 1 or letters[0][1] != 1:
        raise UnsupportedPatternError(f"{where}: image {word!r} is not a single generator")
    symbol = letters[0][0]
    if isinstance(engine, SemidirectEngine) and symbol == engine.stable:
        raise UnsupportedPatternError(f"{where}: the stable letter cannot be identified")
    return symbol


def _edge_images(edge: ComplexEdge, end: str) -> Dict[str, str]:
    engine = get_engine(edge.group)
    images = {engine.canonical(g): word for g, word in edge.maps.get(end, {}).items()}
    if set(images) != set(engine.generators):
        raise SchemaError(
            f"Edge {edge.name} must give an image in {end} of each of {list(engine.generators)}"
        )
    return images


def _substitute(source: BaseWordEngine, target: BaseWordEngine, images: Mapping[str, str], letters: Letters) -> Letters:
    """Image of a source word under the homomorphism given on generators."""
    parsed = {source.canonical(g): target.parse(word) for g, word in images.items()}
    result: List = []
    for symbol, exponent in letters:
        image = parsed[symbol]
        result.extend(image if exponent > 0 else target.inverse(image))
    return target.reduce(result)


def fundamental_group(p: PolygonOfGroups) -> FundamentalGroup:
    """
    Pushout of the vertex groups along the edge and face groups.

    Supported pattern: every local map sends generators to generators. The
    generators then fall into identification classes, and the pushout is
    the free product of one cyclic group per class (of the common order),
    amalgamated with at most one semidirect vertex group. Each class is named
    after its first generator in vertex order; a class holding a semidirect
    generator keeps that generator's name.

    Raises:
        UnsupportedPatternError: If a map is not generator to generator, a
            class holds two generators of one vertex group or mixes orders,
            or more than one vertex group is semidirect
    """
    engines = {name: get_engine(group) for name, group in p.vertices.items()}
    vertex_order = {name: i for i, name in enumerate(p.vertices)}
    semidirect = [name for name, engine in engines.items() if isinstance(engine, SemidirectEngine)]
    if len(semidirect) > 1:
        raise UnsupportedPatternError(f"At most one semidirect vertex group is supported, got {semidirect}")
    for name, engine in engines.items():
        if not isinstance(engine, (CyclicFreeProductEngine, SemidirectEngine)):
            raise UnsupportedPatternError(f"Vertex group {name} must be a free product of cyclics or Z x| F_n")

    classes = UnionFind()
    orders: Dict[tuple, int] = {}
    for name, engine in engines.items():
        for symbol in engine.generators:
            node = ("v", name, symbol)
            classes[node]
            orders[node] = engine.order(symbol)

    for edge in p.edges:
        edge_engine = get_engine(edge.group)
        if not isinstance(edge_engine, CyclicFreeProductEngine):
            raise UnsupportedPatternError(f"Edge group {edge.name} must be a free product of cyclics")
        for end in edge.ends:
            for g, word in _edge_images(edge, end).items():
                symbol = _single_generator(engines[end], word, f"{edge.name} -> {end}")
                node = ("e", edge.name, g)
                orders[node] = edge_engine.order(g)
                classes.union(node, ("v", end, symbol))

    face_nodes: List[tuple] = []
    if p.face is not None:
        face_engine = get_engine(p.face.group)
        if not isinstance(face_engine, CyclicFreeProductEngine):
            raise UnsupportedPatternError("Face group must be a free product of cyclics")
        for g in face_engine.generators:
            node = ("f", "face", g)
            classes[node]
            orders[node] = face_engine.order(g)
            face_nodes.append(node)
        for edge_name, images in p.face.maps.items():
            edge_engine = get_engine(p.edge(edge_name).group)
            for g, word in images.items():
                if face_engine.canonical(g) not in face_engine.generators:
                    raise SchemaError(f"Face map into {edge_name} names unknown generator {g!r}")
                symbol = _single_generator(edge_engine, word, f"face -> {edge_name}")
                classes.union(("f", "face", face_engine.canonical(g)), ("e", edge_name, symbol))

    def position(node: tuple) -> Tuple[int, int]:
        engine = engines[node[1]]
        return vertex_order[node[1]], engine.generators.index(node[2])

    members_of = [sorted(group, key=lambda n: (n[0] != "v", n[1], n[2])) for group in classes.to_sets()]
    resolved = []
    for members in members_of:
        vertex_members = sorted((n for n in members if n[0] == "v"), key=position)
        if not vertex_members:
            raise UnsupportedPatternError(f"Generators {members} never reach a vertex group")
        touched = [n[1] for n in vertex_members]
        if len(set(touched)) != len(touched):
            raise UnsupportedPatternError(
                f"Local maps identify two generators of one vertex group: {[n[2] for n in vertex_members]}"
            )
        if len({orders[n] for n in members}) != 1:
            raise UnsupportedPatternError(f"Identified generators have different orders: {members}")
        semidirect_members = [n for n in vertex_members if n[1] in semidirect]
        resolved.append((members, vertex_members, semidirect_members))

    # semidirect classes first so their names stay reserved
    resolved.sort(key=lambda item: (not item[2], position(item[1][0])))
    rep_of: Dict[tuple, str] = {}
    taken = set()
    free_classes: List[Tuple[str, int, Tuple[int, int]]] = []
    for members, vertex_members, semidirect_members in resolved:
        first = (semidirect_members or vertex_members)[0]
        name = first[2]
        if name in taken:
            name = f"{first[2]}_{first[1]}"
        taken.add(name)
        for node in members:
            rep_of[node] = name
        if not semidirect_members:
            free_classes.append((name, orders[first], position(first)))
    free_classes.sort(key=lambda item: item[2])

    names = tuple(name for name, _, _ in free_classes)
    cyclic_orders = tuple(order for _, order, _ in free_classes)
    if any(cyclic_orders):
        rest = GroupScenario.model_validate(
            {"kind": "free_product_cyclic", "orders": cyclic_orders, "generators": names}
        )
    else:
        rest = GroupScenario.model_validate({"kind": "free_group", "rank": len(names), "generators": names})
    title = p.name or "pi1"
    if semidirect:
        base = p.vertices[semidirect[0]]
        group = (
            base.model_copy(update={"name": title})
            if not names
            else GroupScenario(kind="amalgam", name=title, left=base, right=rest)
        )
    else:
        group = rest.model_copy(update={"name": title})

    symbol_map = {
        name: {symbol: rep_of[("v", name, symbol)] for symbol in engine.generators}
        for name, engine in engines.items()
    }
    counts = defaultdict(int)
    for mapping in symbol_map.values():
        for symbol in mapping:
            counts[symbol] += 1
    identification = {}
    for name, mapping in symbol_map.items():
        for symbol, rep in mapping.items():
            if symbol != rep:
                identification[symbol if counts[symbol] == 1 else f"{name}.{symbol}"] = rep

    edge_subgroups = {}
    for edge in p.edges:
        edge_engine = get_engine(edge.group)
        edge_subgroups[edge.name] = SubgroupSpec(
            generators=tuple(rep_of[("e", edge.name, g)] for g in edge_engine.generators)
        )
    face_subgroup = None
    if p.face is not None:
        face_subgroup = SubgroupSpec(generators=tuple(rep_of[node] for node in face_nodes))

    logger.info("Fundamental group of %s: %s on %s", title, group.kind, list(get_engine(group).generators))
    return FundamentalGroup(
        group=group,
        identification=identification,
        symbol_map=symbol_map,
        vertex_subgroups={name: SubgroupSpec(generators=tuple(symbol_map[name].values())) for name in engines},
        edge_subgroups=edge_subgroups,
        face_subgroup=face_subgroup,
    )


def _develop(
    group: GroupScenario,
    vertex_specs: Mapping[str, SubgroupSpec],
    edges: Sequence[EdgeSpec],
    face_spec: Optional[SubgroupSpec],
    radius: int,
    gens: Optional[Sequence[str]],
    budget: Optional[int],
) -> DevelopmentBall:
    engine = get_engine(group)
    elements, lengths = enumerate_ball(engine, gens, radius, budget)
    labels = list(vertex_specs)
    numbers: Dict[str, List[int]] = {}
    entries = []
    for label_index, label in enumerate(labels):
        numbers[label], representatives = assign_cosets(engine, vertex_specs[label], elements)
        for number, rep in enumerate(representatives):
            entries.append((lengths[rep], engine.sort_key(rep), label_index, label, number, rep))
    entries.sort(key=lambda entry: entry[:3])
    vertex_id = {(entry[3], entry[4]): i for i, entry in enumerate(entries)}
    registry = tuple(
        RegistryEntry(vertex_id=i, face_label=entry[3], representative=format_letters(entry[5]))
        for i, entry in enumerate(entries)
    )

    edge_cosets = []
    skeleton_edges = set()
    for name, first, second, spec in edges:
        index = CosetIndex(engine, spec)
        seen = set()
        for k, element in enumerate(elements):
            number = index.locate(element)
            if number in seen:
                continue
            seen.add(number)
            u = vertex_id[(first, numbers[first][k])]
            v = vertex_id[(second, numbers[second][k])]
            edge_cosets.append((name, u, v))
            skeleton_edges.add((min(u, v), max(u, v)))

    faces = []
    if face_spec is not None:
        index = CosetIndex(engine, face_spec)
        seen = set()
        for k, element in enumerate(elements):
            number = index.locate(element)
            if number not in seen:
                seen.add(number)
                faces.append(tuple(vertex_id[(label, numbers[label][k])] for label in labels))

    skeleton = MetricGraph(
        vertices=len(entries),
        edges=sorted(skeleton_edges),
        labels={i: f"{entry.face_label}:{entry.representative}" for i, entry in enumerate(registry)},
    )
    tree = face_spec is None and nx.is_tree(_nx(skeleton))
    logger.info(
        "Development ball radius %d: %d elements, %d vertices, %d edges, %d faces",
        radius, len(elements), len(entries), len(skeleton_edges), len(faces),
    )
    used = tuple(engine.canonical(g) for g in gens) if gens else engine.generators
    return DevelopmentBall(
        skeleton=skeleton,
        registry=registry,
        faces=tuple(faces),
        edge_cosets=tuple(edge_cosets),
        radius=radius,
        generators=used,
        is_tree=tree,
        group=group,
        vertex_subgroups=dict(vertex_specs),
        elements=tuple(elements),
    )


def _nx(g: MetricGraph) -> nx.Graph:
    graph = nx.Graph()
    graph.add_nodes_from(range(g.vertex_count))
    graph.add_edges_from((u, v) for u, v, _ in g.edges)
    return graph


def development_ball(
    p: PolygonOfGroups,
    radius: int,
    gens: Optional[Sequence[str]] = None,
    budget: Optional[int] = None,
) -> DevelopmentBall:
    """
    Ball of the development of a polygon of groups.

    Vertex ids follow the word length of the shortlex-least representative,
    then shortlex order, then vertex order of the polygon. Each face coset
    is listed by its corners in vertex order.

    Raises:
        UnsupportedPatternError: If the pushout pattern is unsupported
        BudgetExceededError: If the ball exceeds the element budget
    """
    fg = fundamental_group(p)
    edges = [(edge.name, edge.ends[0], edge.ends[1], fg.edge_subgroups[edge.name]) for edge in p.edges]
    face = fg.face_subgroup if p.face is not None else None
    return _develop(fg.group, fg.vertex_subgroups, edges, face, radius, gens, budget)


def build_bass_serre_ball(
    a: GroupScenario,
    radius: int,
    gens: Optional[Sequence[str]] = None,
    budget: Optional[int] = None,
) -> DevelopmentBall:
    """
    Ball of the Bass-Serre tree of an amalgam A *_C B.

    Vertices are cosets gA (label v1) and gB (label v2), edges are cosets gC.

    Raises:
        SchemaError: If a is not an amalgam
        InvariantBreachError: If the ball is not a tree
    """
    if a.kind != "amalgam":
        raise SchemaError(f"Bass-Serre trees need an amalgam, got {a.kind}")
    left, right = get_engine(a.left), get_engine(a.right)
    specs = {
        "v1": SubgroupSpec(generators=left.generators),
        "v2": SubgroupSpec(generators=right.generators),
    }
    edge = SubgroupSpec(generators=tuple(word for word, _ in a.identifications))
    ball = _develop(a, specs, [("e", "v1", "v2", edge)], None, radius, gens, budget)
    if not ball.is_tree:
        raise InvariantBreachError(f"Bass-Serre ball of {a.name or 'amalgam'} has a cycle")
    return ball


def restrict(p: PolygonOfGroups, edge_names: Iterable[str]) -> PolygonOfGroups:
    """Sub-complex on the given edges and the vertices they touch, without face."""
    edges = tuple(p.edge(name) for name in edge_names)
    touched = {end for edge in edges for end in edge.ends}
    vertices = {name: group for name, group in p.vertices.items() if name in touched}
    return PolygonOfGroups(name=f"{p.name}|{','.join(e.name for e in edges)}", vertices=vertices, edges=edges)


def as_amalgam(p: PolygonOfGroups) -> GroupScenario:
    """The amalgam G_v *_{G_e} G_w of a single-edge complex."""
    if len(p.edges) != 1 or p.face is not None:
        raise SchemaError("Only a single edge without face is an amalgam")
    edge = p.edges[0]
    first, second = edge.ends
    left_images, right_images = _edge_images(edge, first), _edge_images(edge, second)
    identifications = tuple((left_images[g], right_images[g]) for g in get_engine(edge.group).generators)
    return GroupScenario(
        kind="amalgam",
        name=p.name,
        left=p.vertices[first],
        right=p.vertices[second],
        identifications=identifications,
    )


def _lookup(b: DevelopmentBall) -> Dict[str, Tuple[CosetIndex, Dict[int, int]]]:
    lookup = b._lookup
    if lookup is None:
        engine = get_engine(b.group)
        lookup = {label: (CosetIndex(engine, spec), {}) for label, spec in b.vertex_subgroups.items()}
        for entry in b.registry:
            index, ids = lookup[entry.face_label]
            ids[index.locate(engine.reduce(engine.parse(entry.representative)))] = entry.vertex_id
        b._lookup = lookup
    return lookup


def locate_coset(b: DevelopmentBall, label: str, word) -> int:
    """
    Vertex id of the coset w G_label in a development ball.

    Raises:
        UnmatchedCosetError: If the coset is not in the ball
    """
    lookup = _lookup(b)
    if label not in lookup:
        raise UnmatchedCosetError(f"Unknown vertex label {label!r}; labels are {sorted(lookup)}")
    engine = get_engine(b.group)
    letters = engine.reduce(to_letters(b.group, word))
    index, ids = lookup[label]
    number = index.find(letters)
    if number is None:
        raise UnmatchedCosetError(f"Coset {format_letters(letters)} {label} lies outside the radius-{b.radius} ball")
    return ids[number]


def coset_map(src: DevelopmentBall, dst: DevelopmentBall) -> List[int]:
    """Vertex map gG_v -> gG_v from one ball into another with the same labels."""
    return [locate_coset(dst, entry.face_label, entry.representative) for entry in src.registry]


def check_local_maps(
    p: PolygonOfGroups,
    radius: Optional[int] = None,
    budget: Optional[int] = None,
) -> List[LocalMapCheck]:
    """Injectivity of every local map on a ball of its source group."""
    radius = settings.LOCAL_MAP_SCAN_RADIUS if radius is None else radius
    checks = []

    def scan(source: GroupScenario, target: GroupScenario, images: Mapping[str, str], label: Tuple[str, str]):
        source_engine, target_engine = get_engine(source), get_engine(target)
        elements, _ = enumerate_ball(source_engine, None, radius, budget)
        seen = {}
        injective = True
        for element in elements:
            image = _substitute(source_engine, target_engine, images, element)
            if image in seen:
                injective = False
                logger.warning(
                    "%s -> %s identifies %s and %s",
                    label[0], label[1], format_letters(seen[image]), format_letters(element),
                )
                break
            seen[image] = element
        checks.append(LocalMapCheck(source=label[0], target=label[1], scanned=len(elements), injective=injective))

    for edge in p.edges:
        for end in edge.ends:
            scan(edge.group, p.vertices[end], _edge_images(edge, end), (edge.name, end))
    if p.face is not None:
        face_engine = get_engine(p.face.group)
        for edge in p.edges:
            images = p.face.maps.get(edge.name)
            if images is None:
                if face_engine.generators:
                    raise SchemaError(f"Face map into {edge.name} is missing")
                continue
            scan(p.face.group, edge.group, images, ("face", edge.name))
    return checks


def intersection_condition_check(
    p: PolygonOfGroups,
    radius: Optional[int] = None,
    budget: Optional[int] = None,
) -> List[IntersectionCheck]:
    """
    At every corner v with edges e, e', compare G_e cap G_e' inside G_v with
    the image of the face group, over a ball of G_v.
    """
    if p.face is None:
        raise SchemaError("The intersection condition needs a polygon with a face")
    radius = settings.LOCAL_MAP_SCAN_RADIUS if radius is None else radius
    face_engine = get_engine(p.face.group)
    rows = []
    for name, group in p.vertices.items():
        engine = get_engine(group)
        incident = [edge for edge in p.edges if name in edge.ends]
        first, second = incident[0], incident[1]
        images = [
            SubgroupSpec(generators=tuple(
                _single_generator(engine, word, f"{edge.name} -> {name}")
                for word in _edge_images(edge, name).values()
            ))
            for edge in (first, second)
        ]
        face_maps = p.face.maps.get(first.name)
        if face_maps is None and face_engine.generators:
            raise SchemaError(f"Face map into {first.name} is missing")
        face_symbols = []
        for g in face_engine.generators:
            edge_word = get_engine(first.group).parse(face_maps[g])
            image = _substitute(get_engine(first.group), engine, _edge_images(first, name), edge_word)
            face_symbols.append(_single_generator(engine, format_letters(image), f"face -> {name}"))
        face_image = SubgroupSpec(generators=tuple(face_symbols))
        elements, _ = enumerate_ball(engine, None, radius, budget)
        meet = {e for e in elements if engine.member(e, images[0]) and engine.member(e, images[1])}
        from_face = {e for e in elements if engine.member(e, face_image)}
        rows.append(IntersectionCheck(
            vertex=name,
            edges=(first.name, second.name),
            intersection=len(meet),
            face_image=len(from_face),
            holds=meet == from_face,
        ))
    return rows


def embedding_profile(
    src: DevelopmentBall,
    dst: DevelopmentBall,
    samples: int = 2000,
    probe_m: Optional[int] = None,
    seed: Optional[int] = None,
) -> EmbeddingProfile:
    """
    Distance comparison along the coset map gG_v -> gG_v of one ball into another.

    Pairs are the base vertex against every vertex, plus a seeded sample.
    The properness table lists, for each target scale M, the largest source
    distance among pairs at target distance <= M. Bounded target distance
    against source distances at ball scale flags the embedding as not proper.

    Raises:
        UnmatchedCosetError: If a source coset is missing from the target ball
    """
    probe_m = settings.PROPERNESS_PROBE_M if probe_m is None else probe_m
    seed = settings.DEFAULT_SEED if seed is None else seed
    image = coset_map(src, dst)
    n = src.skeleton.vertex_count
    pairs = {(0, v) for v in range(1, n)}
    pairs.update(sample_pairs(n, samples, seed))
    source_metric, target_metric = metric_of(src.skeleton), metric_of(dst.skeleton)
    rows = []
    for u, v in sorted(pairs):
        d_source = source_metric.d(u, v)
        d_target = target_metric.d(image[u], image[v])
        rows.append(EmbeddingRow(
            source=u,
            target=v,
            d_source=d_source,
            d_target=d_target,
            boundary_affected=src.boundary_affected(d_source) or dst.boundary_affected(d_target),
        ))
    clear = [row for row in rows if not row.boundary_affected]
    top = int(max((row.d_target for row in clear), default=0))
    table = []
    for m in range(top + 1):
        reached = [row.d_source for row in clear if row.d_target <= m]
        table.append((m, max(reached, default=Fraction(0))))
    at_probe = dict(table).get(probe_m, table[-1][1] if table else Fraction(0))
    non_proper = at_probe >= src.radius - 1
    if non_proper:
        logger.info("Target distance <= %d reaches source distance %s at radius %d", probe_m, at_probe, src.radius)
    return EmbeddingProfile(
        rows=tuple(rows),
        properness=PropernessProfile(
            table=tuple(table), probe_m=probe_m, source_radius=src.radius, non_proper=non_proper
        ),
    )


def _family_words(letters: Sequence[str], n: int) -> Dict[str, str]:
    blocks = " ".join(list(letters) * n)
    prefix = " ".join(letters[i % len(letters)] for i in range(n))
    return {"blocks": blocks, "letters": prefix}


def alternating_family_profile(
    p: PolygonOfGroups,
    sub_edges: Sequence[str],
    letters: Sequence[str] = ("d", "b"),
    n_max: int = 6,
    radius: Optional[int] = None,
    gens: Optional[Sequence[str]] = None,
    budget: Optional[int] = None,
) -> FamilyProfile:
    """
    Distances from the base coset to w_n G_w in the Bass-Serre tree of a
    single-edge sub-complex and in the development of the whole polygon.

    Two readings of w_n are reported: n repetitions of the letter block
    ("blocks") and the first n letters of the alternation ("letters").
    The base coset is G_v for the first end v of the sub-edge, the target
    cosets use its second end w.
    """
    if len(sub_edges) != 1:
        raise SchemaError("The family profile compares against a single-edge sub-complex")
    needed = len(letters) * n_max
    radius = needed if radius is None else radius
    if radius < needed:
        raise SchemaError(f"Radius {radius} cannot reach the block words of length {needed}")
    sub = restrict(p, sub_edges)
    base_label, target_label = sub.edges[0].ends
    tree = build_bass_serre_ball(as_amalgam(sub), radius, gens, budget)
    development = development_ball(p, radius, gens, budget)
    tree_base = locate_coset(tree, "v1", "1")
    dev_base = locate_coset(development, base_label, "1")
    tree_metric, dev_metric = metric_of(tree.skeleton), metric_of(development.skeleton)
    rows = []
    for n in range(1, n_max + 1):
        for reading, word in _family_words(letters, n).items():
            d_tree = tree_metric.d(tree_base, locate_coset(tree, "v2", word))
            d_dev = dev_metric.d(dev_base, locate_coset(development, target_label, word))
            rows.append(FamilyRow(
                n=n,
                reading=reading,
                word=word,
                d_tree=d_tree,
                d_development=d_dev,
                matches_n_plus_1=d_tree == n + 1,
                boundary_affected=development.boundary_affected(d_dev),
            ))
    matching = tuple(
        reading for reading in ("blocks", "letters")
        if all(row.matches_n_plus_1 for row in rows if row.reading == reading)
    )
    return FamilyProfile(rows=tuple(rows), matching_readings=matching)


def coned_cayley_vs_development(
    p: PolygonOfGroups,
    radius: int,
    gens: Optional[Sequence[str]] = None,
    annulus: int = 2,
    seed: Optional[int] = None,
    budget: Optional[int] = None,
) -> DevelopmentComparison:
    """
    Quasi-isometry parameters between the Cayley ball coned off along the
    cosets of the local groups and the development ball.

    Group elements map to their G_v1 coset; the cone over gG_sigma maps to the
    coset gG_v of a corner v of sigma. Only vertices whose representative has
    word length <= radius - annulus take part.
    """
    seed = settings.DEFAULT_SEED if seed is None else seed
    fg = fundamental_group(p)
    engine = get_engine(fg.group)
    ball = cayley_ball(fg.group, gens, radius, budget)
    development = development_ball(p, radius, gens, budget)
    labels = list(p.vertices)

    cells: List[Tuple[str, SubgroupSpec, str]] = [(label, fg.vertex_subgroups[label], label) for label in labels]
    cells += [(edge.name, fg.edge_subgroups[edge.name], edge.ends[0]) for edge in p.edges]
    if fg.face_subgroup is not None:
        cells.append(("face", fg.face_subgroup, labels[0]))

    _, lengths = enumerate_ball(engine, gens, radius, budget)
    sets: Dict[str, List[int]] = {}
    cone_targets: List[int] = []
    cone_clear: List[bool] = []
    for name, spec, corner in cells:
        if engine.classify(spec)[0] == "trivial":
            continue
        numbers, representatives = assign_cosets(engine, spec, ball.elements)
        for number, rep in enumerate(representatives):
            sets[f"{name}:{format_letters(rep)}"] = [k for k, c in enumerate(numbers) if c == number]
            cone_targets.append(locate_coset(development, corner, rep))
            cone_clear.append(lengths[rep] <= radius - annulus)

    coned = cone_off(ball.graph, sets, measure=False)
    base_targets = [locate_coset(development, labels[0], element) for element in ball.elements]
    targets = base_targets + cone_targets
    clear = [k for k, element in enumerate(ball.elements) if lengths[element] <= radius - annulus]
    clear += [len(base_targets) + i for i, ok in enumerate(cone_clear) if ok]

    source_metric, target_metric = metric_of(coned.extended), metric_of(development.skeleton)
    chosen = sample_pairs(len(clear), settings.PAIR_BUDGET, seed)
    pairs = [
        (source_metric.d(clear[i], clear[j]), target_metric.d(targets[clear[i]], targets[clear[j]]))
        for i, j in chosen
    ]
    cap = max((s for s, _ in pairs), default=Fraction(0))
    params = fit_quasi_params(pairs, cap)
    logger.info("Coned Cayley ball vs development at radius %d: %s", radius, params)
    return DevelopmentComparison(params=params, radius=radius, annulus=annulus, clear_vertices=len(clear))


def edge_concat_check(
    b: DevelopmentBall,
    triples: Iterable[Tuple[int, int, int]],
) -> List[EdgeConcatVerdict]:
    """
    Whether the two-edge path b1 - b - b2 is a 1-skeleton geodesic, with the
    faces holding each edge as evidence for the distinct-faces hypothesis.

    Raises:
        InvalidPathError: If b1 - b - b2 is not a path of two edges
    """
    metric = metric_of(b.skeleton)
    adjacency = metric.adjacency
    corner_sets = [frozenset(face) for face in b.faces]
    verdicts = []
    for b1, middle, b2 in triples:
        metric.check(b1, middle, b2)
        if b1 == b2:
            verdicts.append(EdgeConcatVerdict(triple=(b1, middle, b2), distance=0, verdict="not applicable"))
            continue
        if b1 not in adjacency[middle] or b2 not in adjacency[middle]:
            raise InvalidPathError(f"{b1} - {middle} - {b2} is not a path of two edges")
        d = metric.d(b1, b2)
        first = tuple(i for i, face in enumerate(corner_sets) if {b1, middle} <= face)
        second = tuple(i for i, face in enumerate(corner_sets) if {middle, b2} <= face)
        distinct = None
        if b.faces:
            distinct = any(
                f != s and corner_sets[f] & corner_sets[s] == {middle} for f in first for s in second
            )
        verdicts.append(EdgeConcatVerdict(
            triple=(b1, middle, b2),
            distance=d,
            verdict="geodesic" if d == 2 else "shortcut",
            distinct_faces=distinct,
            faces_first=first,
            faces_second=second,
        ))
    return verdicts


def acylindricity_probe(
    b: DevelopmentBall,
    threshold: int,
    element_radius: int = 2,
    max_pairs: int = 200,
    seed: Optional[int] = None,
) -> AcylindricityProbe:
    """
    Count short nontrivial elements fixing both ends of vertex pairs at
    distance >= threshold. g fixes xG_v exactly when x^-1 g x lies in G_v.
    """
    seed = settings.DEFAULT_SEED if seed is None else seed
    if threshold < 1:
        raise SchemaError("Threshold must be >= 1")
    engine = get_engine(b.group)
    metric = metric_of(b.skeleton)
    reps = [engine.reduce(engine.parse(entry.representative)) for entry in b.registry]
    specs = [b.vertex_subgroups[entry.face_label] for entry in b.registry]
    candidates = [
        (u, v) for u, v in sample_pairs(len(reps), settings.PAIR_BUDGET, seed)
        if metric.d(u, v) >= threshold and not b.boundary_affected(metric.d(u, v))
    ]
    if len(candidates) > max_pairs:
        rng = np.random.default_rng(seed)
        picked = sorted(rng.choice(len(candidates), size=max_pairs, replace=False))
        candidates = [candidates[int(i)] for i in picked]
    elements, _ = enumerate_ball(engine, b.generators, element_radius, None)

    def fixes(g: Letters, vertex: int) -> bool:
        return engine.member(engine.conjugate(g, reps[vertex]), specs[vertex])

    rows = []
    for u, v in candidates:
        count = sum(1 for g in elements[1:] if fixes(g, u) and fixes(g, v))
        rows.append(StabilizerRow(u=u, v=v, distance=metric.d(u, v), common_fixers=count))
    return AcylindricityProbe(
        threshold=threshold,
        element_radius=element_radius,
        rows=tuple(rows),
        max_common_fixers=max((row.common_fixers for row in rows), default=0),
    )
