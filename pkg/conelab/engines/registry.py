"""
Word engine registry.
Maps scenario kinds to engine factories and caches one engine per scenario.
"""

from typing import Callable, Dict

from conelab.engines.base import BaseWordEngine
from conelab.models.group import GroupScenario
from conelab.utils.errors import SchemaError

EngineFactory = Callable[[GroupScenario], BaseWordEngine]


class WordEngineRegistry:
    """
    Registry for word-problem engines.
    Handles registration and instantiation per scenario kind.
    """

    _factories: Dict[str, EngineFactory] = {}

    @classmethod
    def register(cls, kind: str, factory: EngineFactory):
        """
        Register an engine factory.

        Args:
            kind: Scenario kind (e.g., "free_group", "amalgam")
            factory: Callable building an engine from a scenario
        """
        cls._factories[kind] = factory

    @classmethod
    def build(cls, scenario: GroupScenario) -> BaseWordEngine:
        """
        Build a fresh engine for a scenario.

        Raises:
            SchemaError: If no factory is registered for the kind
        """
        factory = cls._factories.get(scenario.kind)
        if factory is None:
            available = ", ".join(sorted(cls._factories))
            raise SchemaError(f"Unsupported group kind: {scenario.kind}. Available kinds: {available}")
        return factory(scenario)

    @classmethod
    def list_kinds(cls) -> list:
        """List all registered kinds."""
        return sorted(cls._factories)


def get_engine(scenario: GroupScenario) -> BaseWordEngine:
    """Engine for a scenario, built once and cached on it."""
    engine = scenario._engine
    if engine is None:
        engine = WordEngineRegistry.build(scenario)
        scenario._engine = engine
    return engine
