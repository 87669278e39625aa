"""
Canonical number formatting shared by the expression evaluator and the
scene emitters.
"""

import math
from decimal import Decimal


def format_number(value: float, significant: int = 6) -> str:
    """
    Format a finite number for emitted attributes and string conversion.

    Integers print bare, non-integers with up to ``significant`` significant
    digits and no trailing zeros. Negative zero prints as "0".

    Args:
        value: Finite number
        significant: Significant digits kept for non-integers

    Returns:
        Canonical text form

    Raises:
        ValueError: If value is NaN or infinite
    """
    if isinstance(value, bool) or not math.isfinite(value):
        raise ValueError(f"cannot format non-finite number {value!r}")

    if float(value).is_integer():
        return str(int(value))

    text = f"{value:.{significant}g}"
    if "e" in text or "E" in text:
        text = format(Decimal(text), "f")
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    if text in ("-0", ""):
        return "0"
    return text


def format_angle(radians: float) -> str:
    """Format a rotation angle with five significant digits ("1.5708")."""
    return format_number(radians, significant=5)


def format_vector(values) -> str:
    """Space-separated canonical numbers."""
    return " ".join(format_number(float(v)) for v in values)
