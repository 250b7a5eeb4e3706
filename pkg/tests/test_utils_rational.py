"""
Tests for utils/rational.py
"""
from decimal import Decimal
from fractions import Fraction

import pytest

from conelab.utils.errors import SchemaError
from conelab.utils.rational import ceil_to_denominator, common_denominator, format_rational, parse_rational


class TestParseRational:
    """Tests for parse_rational function."""

    def test_parse_fraction_string(self):
        assert parse_rational("3/4") == Fraction(3, 4)
        assert parse_rational(" 6 / 8 ") == Fraction(3, 4)

    def test_parse_decimal_string(self):
        """Test decimals are read exactly."""
        assert parse_rational("0.5") == Fraction(1, 2)
        assert parse_rational("0.1") == Fraction(1, 10)

    def test_parse_int_decimal_and_fraction(self):
        assert parse_rational(3) == 3
        assert parse_rational(Decimal("0.25")) == Fraction(1, 4)
        assert parse_rational(Fraction(2, 3)) == Fraction(2, 3)

    def test_rejects_float(self):
        with pytest.raises(SchemaError):
            parse_rational(0.5)

    def test_rejects_bool(self):
        with pytest.raises(SchemaError):
            parse_rational(True)

    @pytest.mark.parametrize("text", ["abc", "1/0", "1/x", ""])
    def test_rejects_bad_strings(self, text):
        with pytest.raises(SchemaError):
            parse_rational(text)


class TestFormatting:
    """Tests for format_rational and the denominator helpers."""

    def test_format_integer_and_fraction(self):
        assert format_rational(Fraction(4, 2)) == "2"
        assert format_rational(Fraction(-3, 6)) == "-1/2"

    def test_format_then_parse(self):
        assert parse_rational(format_rational(Fraction(7, 3))) == Fraction(7, 3)

    def test_ceil_to_denominator(self):
        """Test rounding up onto the lattice of denominators <= max."""
        assert ceil_to_denominator(Fraction(1, 3), 2) == Fraction(1, 2)
        assert ceil_to_denominator(Fraction(1, 3), 3) == Fraction(1, 3)
        assert ceil_to_denominator(Fraction(5, 2), 1) == 3

    def test_common_denominator(self):
        assert common_denominator([Fraction(1, 2), Fraction(1, 3), 1]) == 6
        assert common_denominator([]) == 1
