from .catalog import BUNDLED_SCENARIOS
from .complexes import SEMIDIRECT_TRIANGLE, TRIANGLE_OF_INVOLUTIONS
from .contracts import OPERATION_CONTRACTS, describe_operation

__all__ = [
    "BUNDLED_SCENARIOS",
    "SEMIDIRECT_TRIANGLE",
    "TRIANGLE_OF_INVOLUTIONS",
    "OPERATION_CONTRACTS",
    "describe_operation",
]
