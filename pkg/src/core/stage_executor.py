"""
Pipeline Stage Execution Service

Runs the named stages of a pipeline (convert, ingest, apply, layout, emit)
in registration order, timing and logging each one.
"""

import time
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from src.logging import logger


@dataclass
class StageReport:
    """Outcome of one executed stage."""
    name: str
    seconds: float
    counts: Dict[str, int] = field(default_factory=dict)

    def summary(self) -> str:
        counts = ", ".join(f"{k}={v}" for k, v in self.counts.items())
        return f"{self.name}: {self.seconds:.3f}s" + (f" ({counts})" if counts else "")


# A stage receives the shared state dict and returns the counts it reports
Stage = Callable[[Dict[str, Any]], Optional[Dict[str, int]]]


class StageExecutor:
    """
    Executes pipeline stages in order over a shared state dictionary.

    Every stage is logged with its duration; the first failing stage stops
    the run and its exception propagates unchanged.
    """

    def __init__(self):
        """Initialize the stage executor."""
        self._stages: Dict[str, Stage] = {}
        logger.debug("⚙️ Stage executor initialized")

    def register_stage(self, name: str, func: Stage) -> None:
        """
        Register a stage.

        Args:
            name: Stage name (e.g., 'layout')
            func: Callable taking the state dict, returning counts or None
        """
        self._stages[name] = func
        logger.debug(f"📝 Registered stage: {name}")

    def get_stage(self, name: str) -> Optional[Stage]:
        return self._stages.get(name)

    def execute(self, name: str, state: Dict[str, Any]) -> StageReport:
        """
        Run one stage.

        Raises:
            KeyError: If the stage is not registered
            Exception: Whatever the stage raises
        """
        func = self.get_stage(name)
        if func is None:
            logger.error(f"❌ Stage not found: {name}")
            raise KeyError(name)

        start_time = time.time()
        logger.info(f"🔍 Running stage: {name}")
        try:
            counts = func(state) or {}
        except Exception as e:
            logger.error(f"❌ Stage '{name}' failed after {time.time() - start_time:.2f}s: {e}")
            raise
        report = StageReport(name=name, seconds=time.time() - start_time, counts=dict(counts))
        logger.info(f"✅ {report.summary()}")
        return report

    def run_all(self, state: Dict[str, Any]) -> List[StageReport]:
        """Run every registered stage in registration order."""
        return [self.execute(name, state) for name in self.list_stages()]

    def list_stages(self) -> List[str]:
        return list(self._stages.keys())

    def is_registered(self, name: str) -> bool:
        return name in self._stages

    def reset(self) -> None:
        """Forget all registered stages."""
        self._stages.clear()


# Global singleton instance
_executor = StageExecutor()


def get_stage_executor() -> StageExecutor:
    """
    Get the global stage executor instance.

    Returns:
        StageExecutor singleton
    """
    return _executor


def reset() -> None:
    """Clear the global executor (used by tests)."""
    _executor.reset()


__all__ = ["Stage", "StageReport", "StageExecutor", "get_stage_executor", "reset"]
