"""
Error hierarchy for conelab.
Every failure a caller can act on maps to one exit code of the command line.
"""
from enum import IntEnum


class ExitCode(IntEnum):
    """Process exit codes of `conelab run` and friends."""
    OK = 0
    SCHEMA_VIOLATION = 2
    BUDGET_EXCEEDED = 3
    INVARIANT_BREACH = 4


class ConelabError(Exception):
    """Base class of all conelab errors."""
    exit_code: ExitCode = ExitCode.INVARIANT_BREACH


class SchemaError(ConelabError, ValueError):
    """Input document does not match the expected schema."""
    exit_code = ExitCode.SCHEMA_VIOLATION


class UnknownOperationError(SchemaError, KeyError):
    """Operation or scenario name is not registered."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown operation"


class BudgetExceededError(ConelabError):
    """A configured size budget would be exceeded."""
    exit_code = ExitCode.BUDGET_EXCEEDED


class InvariantBreachError(ConelabError):
    """An internal consistency check failed."""
    exit_code = ExitCode.INVARIANT_BREACH


class InvalidGraphError(SchemaError):
    """Graph violates connectivity, loop or weight requirements."""


class UnknownVertexError(SchemaError):
    """Vertex id outside the graph."""


class EmptySetError(SchemaError):
    """A vertex set that must be nonempty is empty."""


class InvalidPathError(SchemaError):
    """Path is not valid in its graph or has the wrong shape."""


class MembershipError(SchemaError):
    """A vertex is not a member of the required set."""


class UnknownSymbolError(SchemaError):
    """Word uses a symbol outside the scenario alphabet."""


class InvalidMapError(SchemaError):
    """Vertex map between graphs is not injective or stretches an edge."""


class PhiInverseUnavailableError(ConelabError, ValueError):
    """Inverse image of a generator was not found within the search ball."""
    exit_code = ExitCode.SCHEMA_VIOLATION


class UnsupportedSubgroupError(ConelabError, ValueError):
    """Membership is not decidable by the engine for this subgroup."""
    exit_code = ExitCode.SCHEMA_VIOLATION


class UnsupportedPatternError(ConelabError, ValueError):
    """Presentation or pushout pattern outside the supported classes."""
    exit_code = ExitCode.SCHEMA_VIOLATION


class UnmatchedCosetError(ConelabError, ValueError):
    """A coset has no counterpart in the target registry."""
    exit_code = ExitCode.SCHEMA_VIOLATION


__all__ = [
    "ExitCode",
    "ConelabError",
    "SchemaError",
    "UnknownOperationError",
    "BudgetExceededError",
    "InvariantBreachError",
    "InvalidGraphError",
    "UnknownVertexError",
    "EmptySetError",
    "InvalidPathError",
    "MembershipError",
    "UnknownSymbolError",
    "InvalidMapError",
    "PhiInverseUnavailableError",
    "UnsupportedSubgroupError",
    "UnsupportedPatternError",
    "UnmatchedCosetError",
]
