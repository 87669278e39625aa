"""Canonical number formatting."""

import math

import pytest
from hypothesis import given, strategies as st

from src.utils.numbers import format_angle, format_number, format_vector


@pytest.mark.parametrize(
    "value, text",
    [
        (42, "42"),
        (42.0, "42"),
        (-0.0, "0"),
        (0.5, "0.5"),
        (0.1234567, "0.123457"),
        (1.5e-7, "0.00000015"),
        (-13.25, "-13.25"),
    ],
)
def test_known_values(value, text):
    assert format_number(value) == text


def test_angles_keep_five_digits():
    assert format_angle(math.pi / 2) == "1.5708"
    assert format_angle(-math.pi) == "-3.1416"


def test_vectors():
    assert format_vector((1.0, 0.5, 0)) == "1 0.5 0"


@pytest.mark.parametrize("value", [math.nan, math.inf, -math.inf])
def test_non_finite_values_are_rejected(value):
    with pytest.raises(ValueError):
        format_number(value)


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_formatting_is_plain_and_close(value):
    text = format_number(value)
    assert "e" not in text.lower()
    if "." in text:
        assert not text.endswith("0")
        assert not text.endswith(".")
    assert math.isclose(float(text), value, rel_tol=1e-5, abs_tol=0.0)


@given(st.integers(min_value=-10**12, max_value=10**12))
def test_integers_print_bare(value):
    assert format_number(float(value)) == str(value)
