"""
Rational Number Utilities

Parsing and formatting of exact edge lengths and measured constants.
Values travel as "p/q" strings (or plain integers / decimals) in every
JSON and CSV artifact.
"""

import math
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Union

from conelab.utils.errors import SchemaError

RationalLike = Union[Fraction, int, str, Decimal]


def parse_rational(value: RationalLike) -> Fraction:
    """
    Parse a rational from an int, Fraction, decimal string or "p/q" string.

    Args:
        value: Raw value from a document or a caller

    Returns:
        Exact Fraction

    Raises:
        SchemaError: If the value is a float, a bool or not a rational literal

    Examples:
        >>> parse_rational("3/4")
        Fraction(3, 4)
        >>> parse_rational("0.5")
        Fraction(1, 2)
    """
    if isinstance(value, bool):
        raise SchemaError(f"Not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        # Floats are rejected; exact inputs only
        raise SchemaError(f"Floating point lengths are not accepted: {value!r}; use 'p/q'")
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        try:
            if "/" in text:
                num, den = text.split("/", 1)
                return Fraction(int(num.strip()), int(den.strip()))
            return Fraction(Decimal(text))
        except (ValueError, ZeroDivisionError, InvalidOperation) as exc:
            raise SchemaError(f"Not a rational: {value!r}") from exc
    raise SchemaError(f"Not a rational: {value!r}")


def format_rational(value: Fraction) -> str:
    """Format a Fraction as "p" or "p/q"."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def ceil_to_denominator(value: Fraction, max_denominator: int) -> Fraction:
    """Smallest rational with denominator <= max_denominator that is >= value."""
    value = Fraction(value)
    best = Fraction(math.ceil(value))
    for den in range(2, max_denominator + 1):
        candidate = Fraction(math.ceil(value * den), den)
        if candidate < best:
            best = candidate
    return best


def common_denominator(values) -> int:
    """Least common denominator of an iterable of Fractions."""
    den = 1
    for value in values:
        den = math.lcm(den, Fraction(value).denominator)
    return den
