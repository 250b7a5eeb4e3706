"""
Operation contracts shown by `conelab describe <op>`.

Each entry lists the parameters a pipeline step reads and what it writes.
`$name` values refer to scenario inputs or to earlier step ids.
"""

from typing import Any, Dict

_GRAPH = "graph: $ref to a graph, coned graph (use: base | extended), ball or Cayley ball"

OPERATION_CONTRACTS: Dict[str, Dict[str, Any]] = {
    # metric-core
    "validate": {
        "params": [_GRAPH],
        "result": "vertex and edge counts, connectivity, self-loops, non-positive weights, out-of-range ids",
    },
    "distance": {
        "params": [_GRAPH, "u", "v: vertex ids"],
        "result": "exact shortest-path length as p/q",
        "errors": "schema violation (2) for unknown vertices",
    },
    "geodesic": {
        "params": [_GRAPH, "u", "v: vertex ids"],
        "result": "lexicographically smallest shortest path and its length",
    },
    "interval": {
        "params": [_GRAPH, "u", "v: vertex ids"],
        "result": "sorted vertices lying on some geodesic from u to v",
    },
    "gromov_product": {
        "params": [_GRAPH, "base", "a", "b: vertex ids"],
        "result": "(a.b)_base = (d(base, a) + d(base, b) - d(a, b)) / 2",
    },
    "hausdorff_distance": {
        "params": [_GRAPH, "first", "second: vertex ids, or $ref to a path or interval step"],
        "result": "exact Hausdorff distance between the two sets",
        "errors": "schema violation (2) for an empty set",
    },
    "nearest_point_projection": {
        "params": [_GRAPH, "members: vertex ids of a nonempty set", "x: vertex id"],
        "result": "nearest member to x, ties to the lowest id",
    },
    "delta_four_point": {
        "params": [_GRAPH, "mode: exhaustive | sampled | auto", "count: quadruples in sampled mode"],
        "result": "four-point delta as p/q with its certificate quadruple; sampled runs record the seed",
        "errors": "budget exceeded (3) for exhaustive mode above budgets.delta_exhaustive",
    },
    "slim_triangle_constant": {
        "params": [_GRAPH],
        "result": "smallest delta with every geodesic triangle delta-slim",
    },
    "quasiconvexity_constant": {
        "params": [_GRAPH, "members: vertex ids of a nonempty set"],
        "result": "max over pairs of the set of the distance from their interval to the set",
    },
    "polygon_slimness": {
        "params": [_GRAPH, "corners: polygon corner ids in order"],
        "result": "max distance from a side to the union of the other sides",
    },
    "measure_quasigeodesic": {
        "params": [_GRAPH, "path: vertex ids"],
        "result": "lambda and eps of the path as a quasigeodesic",
    },
    # electrify
    "cone_off": {
        "params": [_GRAPH, "sets: {id: [vertex ids]} or [[vertex ids]]", "measure: bool"],
        "result": "coned graph with cone vertices n.. in set order, and the measured base constants",
    },
    "electric_path": {
        "params": ["coned: $ref", "set_id", "x", "x_prime: members of the set"],
        "result": "length-2 path x - cone - x_prime",
        "errors": "schema violation (2) when x or x_prime is outside the set",
    },
    "de_electrify": {
        "params": ["coned: $ref", "path: extended vertex ids, or $ref to an electric_path or geodesic step"],
        "result": "dotted base path and its measured step bound",
        "errors": "schema violation (2) when the path is not a walk or ends at a cone vertex",
    },
    "compare_cone_offs": {
        "params": [_GRAPH, "sets_a", "sets_b: set families at finite Hausdorff distance"],
        "result": "Hausdorff bound and quasi-isometry parameters of the identity between the cone-offs",
    },
    "fellow_travel_stats": {
        "params": ["coned: $ref", "pairs: optional [[u, v]]"],
        "result": "per pair the Hausdorff distance between base and extended geodesics; CSV table",
    },
    "attach_horoballs": {
        "params": [_GRAPH, "sets", "depth: levels per horoball"],
        "result": "cusped graph",
    },
    "local_finiteness_profile": {
        "params": [_GRAPH, "sets", "center: vertex id", "radii: [int]"],
        "result": "number of sets meeting each ball; CSV table",
    },
    "de_electrification_profile": {
        "params": ["coned: $ref", "max_length", "pair_limit: optional"],
        "result": "max quasiconvexity constant of de-electrified geodesics per extended length; CSV table",
    },
    "electric_divergence_profile": {
        "params": ["coned: $ref", "max_distance", "samples"],
        "result": "smallest base distance among triples at each extended distance, plus violations; CSV table",
    },
    "tree_cone_family": {
        "params": ["sizes: [int]", "instances", "cones", "cone_radius", "measures: [delta, qc]", "mode: exhaustive | sampled | auto"],
        "result": "per random tree the delta of the extended graph and the quasiconvexity of a segment; CSV table",
    },
    "cycle_fellow_travel": {
        "params": ["n_min", "n_max"],
        "result": "max Hausdorff distance on C_2n with one antipodal pair coned; CSV table",
    },
    # group-words
    "normal_form": {
        "params": ["group: $ref", "word: text such as 'a b^-1'"],
        "result": "normal form and its length",
        "errors": "schema violation (2) for unknown symbols",
    },
    "subgroup_membership": {
        "params": ["group: $ref", "subgroup: name, tag or generator list", "word"],
        "result": "whether the word lies in the subgroup",
        "errors": "schema violation (2) for subgroups the engine cannot decide",
    },
    "cayley_ball": {
        "params": ["group: $ref", "gens: optional generator subset", "radius"],
        "result": "Cayley ball graph; registry CSV of vertex id and normal form",
        "errors": "budget exceeded (3) above the element budget",
    },
    "coset_graph_ball": {
        "params": ["group: $ref", "subgroup: name, tag or generator list", "gens", "radius"],
        "result": "coset graph ball; registry CSV of coset representatives",
    },
    "height_probe": {
        "params": ["group: $ref", "subgroup", "radius", "max_n", "gens"],
        "result": "finite-scale lower bound for the height, with witness and cosets",
    },
    "distortion_profile": {
        "params": ["group: $ref to a semidirect_z_free scenario", "k_max", "generator", "search_k"],
        "result": "k, fiber length of phi^k(x), ambient length and method, ratio; CSV table",
    },
    # complex-dev
    "fundamental_group": {
        "params": ["polygon: $ref"],
        "result": "pushout presentation with the images of vertex, edge and face groups",
        "errors": "unsupported pattern (1) outside generator-to-generator gluings",
    },
    "check_local_maps": {
        "params": ["polygon: $ref", "radius: collision scan radius"],
        "result": "injectivity of every local map on a ball",
    },
    "intersection_condition_check": {
        "params": ["polygon: $ref", "radius"],
        "result": "per vertex whether the images of its two edge groups meet in the face image",
    },
    "development_ball": {
        "params": ["polygon: $ref", "radius", "gens"],
        "result": "1-skeleton of the development ball; registry CSV (vertex id, face label, representative)",
    },
    "build_bass_serre_ball": {
        "params": ["group: $ref to an amalgam, or polygon: $ref with sub_edges: [edge]", "radius", "gens"],
        "result": "Bass-Serre tree ball; registry CSV",
        "errors": "invariant breach (4) if the ball has a cycle",
    },
    "alternating_family_profile": {
        "params": ["polygon: $ref", "sub_edges: [edge]", "letters", "n_max", "radius", "gens"],
        "result": "d_tree and d_development of w_n per reading, and which reading matches n + 1; CSV table",
    },
    "embedding_profile": {
        "params": ["source: $ball", "target: $ball", "samples", "probe_m"],
        "result": "properness table M -> rho(M) and the non-proper flag; pair CSV",
        "errors": "unmatched coset (1) if a source coset is missing from the target",
    },
    "coned_cayley_vs_development": {
        "params": ["polygon: $ref", "radius", "gens", "annulus"],
        "result": "quasi-isometry parameters between the coned Cayley ball and the development ball",
    },
    "acylindricity_probe": {
        "params": ["ball: $ball", "threshold", "element_radius", "max_pairs"],
        "result": "common fixers of far-apart vertex pairs; finite-scale evidence only",
    },
    "edge_concat_check": {
        "params": ["ball: $ball", "triples: [[b1, b, b2]]"],
        "result": "whether each two-edge path is a 1-skeleton geodesic, with the faces holding its edges",
    },
    # boundary-diagnostics
    "mitra_profile": {
        "params": [
            "source: graph $ref",
            "target: graph $ref",
            "map: identity | cosets | [vertex ids]",
            "basepoint",
            "n_max",
        ],
        "result": "N -> M(N), the min distance from the image basepoint to images of geodesics at distance >= N; CSV table",
        "errors": "invalid map (2) if the map is not injective or stretches an edge",
    },
    "coned_mitra_profile": {
        "params": ["source", "target", "map", "sets_source", "sets_target", "basepoint", "n_max"],
        "result": "Mitra profile of the extension of the map to the cone-offs; CSV table",
    },
    "divergence_profile": {
        "params": [_GRAPH, "sequence: [vertex ids] or {from, to}", "basepoint"],
        "result": "Gromov products, tail infimum and the diverging / stalled verdict; CSV tables",
    },
    "classify_ray": {
        "params": ["coned: $ref", "ray: [vertex ids] or {from, to}", "window (default: radius // 3)", "radius (default: eccentricity of the first ray vertex)"],
        "result": "horizontal, vertical (with the set) or undetermined",
    },
    "limit_projection_growth": {
        "params": [_GRAPH, "members", "ray"],
        "result": "diameter of the projection of ray prefixes to the set; CSV table",
    },
    "ct_consistency_probe": {
        "params": ["source", "target", "map", "pairs: [[seq_a, seq_b]]", "basepoint"],
        "result": "per pair of sequences whether divergence in the source persists in the target",
    },
    "exchange_condition_probe": {
        "params": ["source: coned $ref", "target: coned $ref", "map", "rays", "window"],
        "result": "per ray its class in both cone-offs; finite evidence, not equivalence",
    },
}


def describe_operation(op: str) -> str:
    """Stable text for one contract."""
    contract = OPERATION_CONTRACTS[op]
    lines = [op, "  params:"]
    lines += [f"    - {param}" for param in contract["params"]]
    lines.append(f"  result: {contract['result']}")
    if "errors" in contract:
        lines.append(f"  errors: {contract['errors']}")
    return "\n".join(lines) + "\n"
