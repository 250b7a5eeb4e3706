"""
Pytest configuration and shared fixtures for conelab tests.
"""
import copy

import pytest

from conelab.models.complex import PolygonOfGroups
from conelab.models.graph import MetricGraph
from conelab.models.group import GroupScenario
from conelab.scenarios.complexes import SEMIDIRECT_TRIANGLE, TRIANGLE_OF_INVOLUTIONS


def path_graph(n: int) -> MetricGraph:
    return MetricGraph(vertices=n, edges=[(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> MetricGraph:
    return MetricGraph(vertices=n, edges=[(i, (i + 1) % n) for i in range(n)])


def binary_tree(depth: int) -> MetricGraph:
    count = 2 ** (depth + 1) - 1
    return MetricGraph(vertices=count, edges=[((child - 1) // 2, child) for child in range(1, count)])


# Graph fixtures
@pytest.fixture
def path5():
    """Path 0 - 1 - 2 - 3 - 4."""
    return path_graph(5)


@pytest.fixture
def square():
    """The 4-cycle."""
    return cycle_graph(4)


@pytest.fixture
def tree15():
    """Complete binary tree of depth 3, children of i are 2i+1 and 2i+2."""
    return binary_tree(3)


@pytest.fixture
def weighted_path():
    """0 -(1/2)- 1 -(1/2)- 2 -(1)- 3."""
    return MetricGraph(vertices=4, edges=[(0, 1, "1/2"), (1, 2, "1/2"), (2, 3, 1)])


# Group fixtures
@pytest.fixture
def free2():
    return GroupScenario(kind="free_group", rank=2)


@pytest.fixture
def z2_z3():
    """Z/2 * Z/3 on a, b."""
    return GroupScenario(kind="free_product_cyclic", orders=(2, 3))


@pytest.fixture
def semidirect():
    """F(x, y, z) x| <t> with the default automorphism x -> y, y -> z, z -> xy."""
    return GroupScenario(kind="semidirect_z_free", rank=3)


# Complex fixtures
@pytest.fixture
def triangle():
    return PolygonOfGroups.model_validate(copy.deepcopy(TRIANGLE_OF_INVOLUTIONS))


@pytest.fixture
def semidirect_triangle():
    return PolygonOfGroups.model_validate(copy.deepcopy(SEMIDIRECT_TRIANGLE))


@pytest.fixture
def path_scenario():
    """Inline scenario measuring and coning a path."""
    return {
        "name": "path-cone",
        "inputs": {"path": {"kind": "graph", "data": {"vertices": 5, "edges": [[0, 1], [1, 2], [2, 3], [3, 4]]}}},
        "pipeline": [
            {"op": "validate", "params": {"graph": "$path"}},
            {"op": "delta_four_point", "params": {"graph": "$path"}},
            {"op": "cone_off", "id": "coned", "params": {"graph": "$path", "sets": {"ends": [0, 4]}}},
            {"op": "fellow_travel_stats", "params": {"coned": "$coned"}},
        ],
        "seed": 11,
    }
