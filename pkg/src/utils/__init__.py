"""Utils module for city-viz-forge."""

from .numbers import format_number, format_angle, format_vector

__all__ = [
    "format_number",
    "format_angle",
    "format_vector",
]
