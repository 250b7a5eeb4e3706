"""
Bundled scenarios, one per reproducible claim.

Each entry is a scenario document as it would appear in a JSON file, so
`conelab run <name>` and `conelab run <file>` share one code path.
"""

from typing import Any, Dict, List, Optional

from conelab.scenarios.complexes import SEMIDIRECT_TRIANGLE, TRIANGLE_OF_INVOLUTIONS

# Generators spanning the alternating words of the triangle family
TRIANGLE_GENERATORS = ["a", "b", "d"]

TRIANGLE_RADIUS = 6


def _binary_tree(depth: int) -> Dict[str, Any]:
    count = 2 ** (depth + 1) - 1
    return {"vertices": count, "edges": [[(child - 1) // 2, child] for child in range(1, count)]}


def _triangle_balls(tree_id: str = "tree") -> List[Dict[str, Any]]:
    """Bass-Serre ball of the e3 amalgam and the development ball, same radius."""
    return [
        {
            "op": "build_bass_serre_ball",
            "id": tree_id,
            "params": {"polygon": "$triangle", "sub_edges": ["e3"], "radius": TRIANGLE_RADIUS, "gens": TRIANGLE_GENERATORS},
        },
        {
            "op": "development_ball",
            "id": "development",
            "params": {"polygon": "$triangle", "radius": TRIANGLE_RADIUS, "gens": TRIANGLE_GENERATORS},
        },
    ]


BUNDLED_SCENARIOS: Dict[str, Dict[str, Any]] = {
    "triangle-non-proper-embedding": {
        "name": "triangle-non-proper-embedding",
        "description": (
            "Triangle of involution groups: the Bass-Serre tree of one edge sits in the development "
            "with w_n G_v2 at distance 2 from G_v1 while the tree distance grows linearly."
        ),
        "inputs": {"triangle": {"kind": "polygon", "data": TRIANGLE_OF_INVOLUTIONS}},
        "pipeline": [
            {"op": "fundamental_group", "id": "pushout", "params": {"polygon": "$triangle"}},
            {"op": "check_local_maps", "id": "local_maps", "params": {"polygon": "$triangle"}},
            {"op": "intersection_condition_check", "id": "intersections", "params": {"polygon": "$triangle"}},
            {
                "op": "alternating_family_profile",
                "id": "family",
                "params": {
                    "polygon": "$triangle",
                    "sub_edges": ["e3"],
                    "letters": ["d", "b"],
                    "n_max": 6,
                    "radius": 12,
                    "gens": TRIANGLE_GENERATORS,
                },
            },
            *_triangle_balls(),
            {"op": "embedding_profile", "id": "embedding", "params": {"source": "$tree", "target": "$development"}},
            {"op": "mitra_profile", "id": "mitra", "params": {"source": "$tree", "target": "$development", "map": "cosets"}},
        ],
        "budgets": {"vertices": 20000},
        "seed": 57,
    },
    "semidirect-distortion": {
        "name": "semidirect-distortion",
        "description": (
            "Fiber of F(x, y, z) x| <t> under x -> y, y -> z, z -> xy: fiber length of phi^k(x) "
            "against ambient length, exact by ball search for small k and by t^k x t^-k beyond."
        ),
        "inputs": {
            "semidirect": {"kind": "group", "data": {"kind": "semidirect_z_free", "rank": 3, "name": "F3 x| Z"}},
            "triangle": {"kind": "polygon", "data": SEMIDIRECT_TRIANGLE},
        },
        "pipeline": [
            {"op": "distortion_profile", "id": "distortion", "params": {"group": "$semidirect", "k_max": 24, "search_k": 4}},
            {"op": "fundamental_group", "id": "pushout", "params": {"polygon": "$triangle"}},
            {"op": "check_local_maps", "id": "local_maps", "params": {"polygon": "$triangle", "radius": 2}},
        ],
        "budgets": {"vertices": 200000},
        "seed": 58,
    },
    "tree-cone-family": {
        "name": "tree-cone-family",
        "description": "Random trees of 50 to 400 vertices with 5 coned subtrees of radius <= 3: delta of the extended graph.",
        "pipeline": [
            {
                "op": "tree_cone_family",
                "id": "trees",
                "params": {
                    "sizes": [50, 100, 200, 400],
                    "instances": 20,
                    "cones": 5,
                    "cone_radius": 3,
                    "measures": ["delta"],
                    "mode": "auto",
                },
            },
        ],
        "budgets": {"vertices": 1000, "delta_exhaustive": 150},
        "seed": 36,
    },
    "cone-qc-persistence": {
        "name": "cone-qc-persistence",
        "description": (
            "Tree segments stay uniformly quasiconvex after coning, and base geodesics of cycles "
            "fellow travel extended geodesics after coning an antipodal pair."
        ),
        "pipeline": [
            {
                "op": "tree_cone_family",
                "id": "segments",
                "params": {"sizes": [50, 100, 200, 400], "instances": 20, "cones": 5, "cone_radius": 3, "measures": ["qc"]},
            },
            {"op": "cycle_fellow_travel", "id": "cycles", "params": {"n_min": 6, "n_max": 30}},
        ],
        "budgets": {"vertices": 1000},
        "seed": 37,
    },
    "mitra-isometric-vs-non-proper": {
        "name": "mitra-isometric-vs-non-proper",
        "description": (
            "Mitra profiles of the identity and of an isometric subtree, against the coset map of "
            "the triangle's Bass-Serre tree into its development."
        ),
        "inputs": {
            "tree": {"kind": "graph", "data": _binary_tree(3)},
            "branch": {"kind": "graph", "data": {"vertices": 4, "edges": [[0, 1], [1, 2], [2, 3]]}},
            "triangle": {"kind": "polygon", "data": TRIANGLE_OF_INVOLUTIONS},
        },
        "pipeline": [
            {"op": "mitra_profile", "id": "identity", "params": {"source": "$tree", "target": "$tree", "map": "identity"}},
            {"op": "mitra_profile", "id": "subtree", "params": {"source": "$branch", "target": "$tree", "map": [0, 1, 3, 7]}},
            *_triangle_balls("tree_ball"),
            {"op": "mitra_profile", "id": "triangle", "params": {"source": "$tree_ball", "target": "$development", "map": "cosets"}},
        ],
        "budgets": {"vertices": 20000},
        "seed": 60,
    },
}


# Short names for the worked examples, resolved to the scenarios above
SCENARIO_ALIASES: Dict[str, str] = {
    "example-5-7": "triangle-non-proper-embedding",
    "example-5-8-distortion": "semidirect-distortion",
    "mitra-isometric-vs-5-7": "mitra-isometric-vs-non-proper",
}


def bundled_scenario(ref: str) -> Optional[Dict[str, Any]]:
    """Scenario document for a bundled name or alias, None for anything else."""
    return BUNDLED_SCENARIOS.get(SCENARIO_ALIASES.get(ref, ref))
