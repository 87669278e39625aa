"""Configuration module for city-viz-forge."""

from .settings import (
    MAX_LOG_BUFFER_SIZE,
    DEFAULT_LOG_LEVEL,
    DEFAULT_ABOVE_CLEARANCE,
    DEFAULT_NEAR_DISTANCE,
    DEFAULT_CONE_BASE_RADIUS,
    DEFAULT_LINE_WIDTH,
    DEFAULT_PANEL_WIDTH,
    DEFAULT_PANEL_HEIGHT,
    DEFAULT_STREAMLINE_STEP,
    DEFAULT_STREAMLINE_LENGTH,
    LAYOUT_WORKERS,
    DEFAULT_COLOR,
    BUILDING_COLOR,
    X3DOM_SCRIPT_URL,
    X3DOM_CSS_URL,
    SCENE_FORMAT_NAME,
    SCENE_FORMAT_VERSION,
)

__all__ = [
    "MAX_LOG_BUFFER_SIZE",
    "DEFAULT_LOG_LEVEL",
    "DEFAULT_ABOVE_CLEARANCE",
    "DEFAULT_NEAR_DISTANCE",
    "DEFAULT_CONE_BASE_RADIUS",
    "DEFAULT_LINE_WIDTH",
    "DEFAULT_PANEL_WIDTH",
    "DEFAULT_PANEL_HEIGHT",
    "DEFAULT_STREAMLINE_STEP",
    "DEFAULT_STREAMLINE_LENGTH",
    "LAYOUT_WORKERS",
    "DEFAULT_COLOR",
    "BUILDING_COLOR",
    "X3DOM_SCRIPT_URL",
    "X3DOM_CSS_URL",
    "SCENE_FORMAT_NAME",
    "SCENE_FORMAT_VERSION",
]
