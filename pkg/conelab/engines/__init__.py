from conelab.engines.base import BaseWordEngine, Letters
from conelab.engines.registry import WordEngineRegistry, get_engine

# Importing providers registers every engine kind
from conelab.engines import providers  # noqa: F401

__all__ = ["BaseWordEngine", "Letters", "WordEngineRegistry", "get_engine"]
