from fractions import Fraction
from typing import Annotated, Literal, Tuple

from pydantic import BaseModel, ConfigDict, PlainSerializer, PlainValidator

from conelab.utils.rational import format_rational, parse_rational

VertexId = int

# Exact rational carried as Fraction, serialized as "p/q"
Rational = Annotated[
    Fraction,
    PlainValidator(parse_rational),
    PlainSerializer(format_rational, return_type=str),
]

DeltaMode = Literal["exhaustive", "sampled"]

DeltaConstant = Literal["four-point", "slim-triangle"]

# A letter of a word: (generator symbol, exponent +1 / -1)
Letter = Tuple[str, int]


class FrozenModel(BaseModel):
    """Immutable model base shared by every domain type."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True, populate_by_name=True)
