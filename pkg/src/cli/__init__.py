"""Command-line front end: staged commands, the pipeline runner and fixtures."""

from .main import build_parser, main, register_pipeline, run_pipeline
from .fixtures import make_fixtures

__all__ = ["build_parser", "main", "register_pipeline", "run_pipeline", "make_fixtures"]
