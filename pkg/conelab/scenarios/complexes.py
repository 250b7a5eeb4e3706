"""
Complexes of groups over a triangle, in the compact polygon form.

Every edge group is infinite cyclic or of order 2 and maps generator to
generator, so the fundamental group is read off by identifying symbols.
"""

from typing import Any, Dict


def _involutions(*names: str) -> Dict[str, Any]:
    return {"kind": "free_product_cyclic", "orders": [2] * len(names), "generators": list(names)}


# Three vertex groups of involutions glued along order-2 edge groups.
# The fundamental group is the free product of four Z/2 on a, b, d, z,
# and the sub-complex on e3 alone is <a, b> *_{a = c} <c, d>.
TRIANGLE_OF_INVOLUTIONS: Dict[str, Any] = {
    "name": "triangle-of-involutions",
    "sides": 3,
    "vertex_groups": [
        _involutions("a", "b"),
        _involutions("c", "d"),
        _involutions("x", "y", "z"),
    ],
    "edge_maps": {
        "e1": {"into_v2": {"t1": "d"}, "into_v3": {"t1": "y"}},
        "e2": {"into_v3": {"t2": "x"}, "into_v1": {"t2": "b"}},
        "e3": {"into_v1": {"t3": "a"}, "into_v2": {"t3": "c"}},
    },
}

# F(x, y, z) x| <t> glued to two free groups along infinite cyclic edges.
# The fundamental group is the semidirect product amalgamated with <d>.
SEMIDIRECT_TRIANGLE: Dict[str, Any] = {
    "name": "semidirect-triangle",
    "sides": 3,
    "vertex_groups": [
        {"kind": "semidirect_z_free", "rank": 3, "generators": ["x", "y", "z"], "stable_letter": "t"},
        {"kind": "free_group", "rank": 2, "generators": ["d", "e"]},
        {"kind": "free_group", "rank": 3, "generators": ["a", "b", "c"]},
    ],
    "edge_maps": {
        "e1": {"into_v2": {"t1": "d"}, "into_v3": {"t1": "c"}},
        "e2": {"into_v1": {"u1": "z", "u2": "x"}, "into_v3": {"u1": "a", "u2": "b"}},
        "e3": {"into_v1": {"t3": "y"}, "into_v2": {"t3": "e"}},
    },
}
