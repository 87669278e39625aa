"""
Configuration and environment setup for city-viz-forge.
"""

import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _env_float(name: str, default: float) -> float:
    return float(os.getenv(name, str(default)))


def _env_rgb(name: str, default: str) -> tuple:
    parts = os.getenv(name, default).split()
    return tuple(float(p) for p in parts)


# Logging configuration
MAX_LOG_BUFFER_SIZE = int(os.getenv("MAX_LOG_BUFFER_SIZE", "1000"))
DEFAULT_LOG_LEVEL = os.getenv("CITYVIZ_LOG_LEVEL", "INFO")

# Layout defaults (meters)
DEFAULT_ABOVE_CLEARANCE = _env_float("CITYVIZ_ABOVE_CLEARANCE", 2.0)
DEFAULT_NEAR_DISTANCE = _env_float("CITYVIZ_NEAR_DISTANCE", 2.0)
DEFAULT_CONE_BASE_RADIUS = _env_float("CITYVIZ_CONE_BASE_RADIUS", 1.0)
DEFAULT_LINE_WIDTH = _env_float("CITYVIZ_LINE_WIDTH", 0.05)
DEFAULT_PANEL_WIDTH = _env_float("CITYVIZ_PANEL_WIDTH", 4.0)
DEFAULT_PANEL_HEIGHT = _env_float("CITYVIZ_PANEL_HEIGHT", 2.0)
DEFAULT_STREAMLINE_STEP = _env_float("CITYVIZ_STREAMLINE_STEP", 0.1)
DEFAULT_STREAMLINE_LENGTH = _env_float("CITYVIZ_STREAMLINE_LENGTH", 10.0)
LAYOUT_WORKERS = int(os.getenv("CITYVIZ_LAYOUT_WORKERS", "1"))

# Emission defaults
DEFAULT_COLOR = _env_rgb("CITYVIZ_DEFAULT_COLOR", "0 0 1")
BUILDING_COLOR = _env_rgb("CITYVIZ_BUILDING_COLOR", "0.8 0.8 0.8")
X3DOM_SCRIPT_URL = os.getenv("CITYVIZ_X3DOM_SCRIPT", "https://www.x3dom.org/download/x3dom.js")
X3DOM_CSS_URL = os.getenv("CITYVIZ_X3DOM_CSS", "https://www.x3dom.org/download/x3dom.css")

# Scene interchange format
SCENE_FORMAT_NAME = "city-viz-forge-scene"
SCENE_FORMAT_VERSION = 1
