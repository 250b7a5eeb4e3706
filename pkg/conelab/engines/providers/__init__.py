"""
Engine providers and their registration with WordEngineRegistry.
"""

from conelab.engines.providers.amalgam import FreeProductEngine
from conelab.engines.providers.cyclic import CyclicFreeProductEngine, MergedCyclicEngine
from conelab.engines.providers.semidirect import SemidirectEngine
from conelab.engines.registry import WordEngineRegistry, get_engine
from conelab.models.group import GroupScenario
from conelab.utils.errors import UnsupportedPatternError


def _free_group(scenario: GroupScenario) -> CyclicFreeProductEngine:
    return CyclicFreeProductEngine(scenario.free_generators, {})


def _free_product_cyclic(scenario: GroupScenario) -> CyclicFreeProductEngine:
    names = scenario.free_generators
    if len(names) != len(scenario.orders):
        raise UnsupportedPatternError("One generator name per cyclic factor is required")
    return CyclicFreeProductEngine(names, dict(zip(names, scenario.orders)))


def _semidirect(scenario: GroupScenario) -> SemidirectEngine:
    return SemidirectEngine(scenario.free_generators, scenario.automorphism, scenario.stable_letter)


def _amalgam(scenario: GroupScenario):
    left, right = get_engine(scenario.left), get_engine(scenario.right)
    if not scenario.identifications:
        return FreeProductEngine([left, right])
    if not (isinstance(left, CyclicFreeProductEngine) and isinstance(right, CyclicFreeProductEngine)):
        raise UnsupportedPatternError(
            "Amalgams over nontrivial edge groups need free products of cyclics on both sides"
        )
    pairs = []
    for left_word, right_word in scenario.identifications:
        left_letters, right_letters = left.parse(left_word), right.parse(right_word)
        if len(left_letters) != 1 or len(right_letters) != 1 or left_letters[0][1] != 1 or right_letters[0][1] != 1:
            raise UnsupportedPatternError(
                f"Only generator-to-generator identifications are supported, got {left_word!r} = {right_word!r}"
            )
        left_symbol, right_symbol = left_letters[0][0], right_letters[0][0]
        if left.order(left_symbol) != right.order(right_symbol):
            raise UnsupportedPatternError(
                f"Identified generators {left_symbol} and {right_symbol} have different orders"
            )
        pairs.append((left_symbol, right_symbol))
    if len({right for _, right in pairs}) != len(pairs) or len({left for left, _ in pairs}) != len(pairs):
        raise UnsupportedPatternError("Each generator may be identified at most once")
    return MergedCyclicEngine(left, right, pairs)


WordEngineRegistry.register("free_group", _free_group)
WordEngineRegistry.register("free_product_cyclic", _free_product_cyclic)
WordEngineRegistry.register("semidirect_z_free", _semidirect)
WordEngineRegistry.register("amalgam", _amalgam)

__all__ = [
    "CyclicFreeProductEngine",
    "MergedCyclicEngine",
    "SemidirectEngine",
    "FreeProductEngine",
]
