from typing import Any, Dict, Literal, Optional, Tuple

from pydantic import Field, PrivateAttr, field_validator, model_validator

from .graph import MetricGraph
from .types import FrozenModel, Letter, Rational, VertexId

GroupKind = Literal["free_group", "free_product_cyclic", "amalgam", "semidirect_z_free"]

SubgroupTag = Literal["whole", "trivial", "fiber"]

# Default automorphism x -> y, y -> z, z -> xy of the rank-3 free group
DEFAULT_PHI = {"x": "y", "y": "z", "z": "x y"}


def default_generator_names(kind: str, count: int) -> Tuple[str, ...]:
    """x, y, z for small free groups and a, b, c, ... for free products of cyclics."""
    if kind == "free_product_cyclic" and count <= 26:
        return tuple(chr(ord("a") + i) for i in range(count))
    if count <= 3:
        return tuple("xyz"[:count])
    return tuple(f"x{i + 1}" for i in range(count))


class Word(FrozenModel):
    """Group element as a sequence of (generator, +1 / -1) letters."""
    letters: Tuple[Letter, ...] = ()

    @field_validator("letters")
    @classmethod
    def check_exponents(cls, value: Tuple[Letter, ...]) -> Tuple[Letter, ...]:
        for symbol, exponent in value:
            if exponent not in (1, -1):
                raise ValueError(f"Letter exponents are +1 or -1, got {symbol}^{exponent}")
        return value

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_letters(self.letters)


def format_letters(letters: Tuple[Letter, ...]) -> str:
    """Space separated letters, inverses as g^-1, identity as 1."""
    if not letters:
        return "1"
    return " ".join(symbol if exponent > 0 else f"{symbol}^-1" for symbol, exponent in letters)


class SubgroupSpec(FrozenModel):
    """A subgroup given by a generator subset or a construction tag."""
    generators: Tuple[str, ...] = ()
    tag: Optional[SubgroupTag] = None

    @model_validator(mode="before")
    @classmethod
    def accept_shorthand(cls, value: Any) -> Any:
        if isinstance(value, str):
            return {"tag": value}
        if isinstance(value, (list, tuple)):
            return {"generators": tuple(value)}
        return value


class GroupScenario(FrozenModel):
    """A presentation from one of the supported classes, with designated subgroups."""
    kind: GroupKind
    name: str = ""
    rank: Optional[int] = Field(default=None, ge=0)
    orders: Optional[Tuple[int, ...]] = None
    generator_names: Optional[Tuple[str, ...]] = Field(default=None, alias="generators")
    phi: Optional[Dict[str, str]] = None
    stable_letter: str = "t"
    left: Optional["GroupScenario"] = None
    right: Optional["GroupScenario"] = None
    identifications: Tuple[Tuple[str, str], ...] = ()
    subgroups: Dict[str, SubgroupSpec] = Field(default_factory=dict)

    # Word engine built on first use, see engines.registry.get_engine
    _engine: Any = PrivateAttr(default=None)

    @model_validator(mode="after")
    def check_kind_fields(self) -> "GroupScenario":
        if self.kind == "free_group" and self.rank is None:
            raise ValueError("free_group needs a rank")
        if self.kind == "free_product_cyclic":
            if self.orders is None:
                raise ValueError("free_product_cyclic needs orders")
            if any(order != 0 and order < 2 for order in self.orders):
                raise ValueError("Cyclic orders are 0 (infinite) or >= 2")
        if self.kind == "semidirect_z_free":
            if not self.rank:
                raise ValueError("semidirect_z_free needs a positive rank")
            if self.phi is None and self.rank != 3:
                raise ValueError("phi is required unless rank is 3")
        if self.kind == "amalgam" and (self.left is None or self.right is None):
            raise ValueError("amalgam needs left and right factors")
        names = self.generator_names
        if names is not None and len(set(names)) != len(names):
            raise ValueError("Generator names must be distinct")
        return self

    @property
    def generator_count(self) -> int:
        if self.kind == "free_product_cyclic":
            return len(self.orders or ())
        return self.rank or 0

    @property
    def free_generators(self) -> Tuple[str, ...]:
        """Generator names before any stable letter."""
        if self.generator_names is not None:
            return self.generator_names
        return default_generator_names(self.kind, self.generator_count)

    @property
    def automorphism(self) -> Dict[str, str]:
        return dict(self.phi) if self.phi is not None else dict(DEFAULT_PHI)

    def subgroup(self, ref: Any) -> SubgroupSpec:
        """Resolve a designated subgroup name, a tag, a generator list or a spec."""
        if isinstance(ref, SubgroupSpec):
            return ref
        if isinstance(ref, str):
            if ref in self.subgroups:
                return self.subgroups[ref]
            return SubgroupSpec(tag=ref)
        return SubgroupSpec.model_validate(ref)


GroupScenario.model_rebuild()


class CayleyBall(FrozenModel):
    """Ball of a Cayley graph with its registry vertex id <-> normal form."""
    graph: MetricGraph
    elements: Tuple[Tuple[Letter, ...], ...]
    generators: Tuple[str, ...]
    radius: int

    def index(self) -> Dict[Tuple[Letter, ...], VertexId]:
        return {element: i for i, element in enumerate(self.elements)}


class CosetGraph(FrozenModel):
    graph: MetricGraph
    representatives: Tuple[Tuple[Letter, ...], ...]
    radius: int


class HeightProbe(FrozenModel):
    """Finite-scale lower bound for the height of a subgroup."""
    lower_bound: int
    max_n: int
    radius: int
    finite_subgroup: bool = False
    cosets: Tuple[str, ...] = ()
    witness: Optional[str] = None
    label: str = "finite-scale probe, not the true height"


class DistortionRow(FrozenModel):
    k: int
    fiber_length: int
    ambient_length: int
    ambient_method: Literal["ball-search", "conjugate-witness"]
    ratio: Rational


class DistortionProfile(FrozenModel):
    rows: Tuple[DistortionRow, ...]
    automorphism: Dict[str, str]
    hyperbolicity_assumed: bool = True
