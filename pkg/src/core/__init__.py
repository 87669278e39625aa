"""Core orchestration for city-viz-forge."""

from .stage_executor import Stage, StageExecutor, StageReport, get_stage_executor, reset

__all__ = ["Stage", "StageExecutor", "StageReport", "get_stage_executor", "reset"]
