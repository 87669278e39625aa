"""
Streamline tracing through vector grids.

Classical fourth-order Runge-Kutta on the unit direction field, so the
step is an arc length in meters. Field values come from trilinear
interpolation of the grid.
"""

import math
from typing import List, Sequence

import numpy as np

from src.datasets.grid import FieldGrid
from src.errors import LayoutError
from src.logging import logger

STAGNATION_SPEED = 1e-12


def _direction(grid: FieldGrid, point: np.ndarray) -> np.ndarray:
    velocity = np.asarray(grid.interpolate(point), dtype=float)
    speed = float(np.linalg.norm(velocity))
    if speed < STAGNATION_SPEED:
        return np.zeros(3)
    return velocity / speed


def trace_streamline(grid: FieldGrid, seed, step: float, max_length: float) -> np.ndarray:
    """
    Trace one streamline from ``seed``.

    Integration stops when the next point would leave the grid box, when the
    traced length reaches ``max_length`` (the last step is shortened to hit
    it exactly), or when the field speed drops below 1e-12.

    Returns:
        (n, 3) array of accepted points, seed first

    Raises:
        LayoutError: If the seed lies outside the grid or step is not positive
    """
    if not grid.is_vector:
        raise LayoutError("streamlines need a vector grid")
    if step <= 0 or not math.isfinite(step):
        raise LayoutError(f"streamline step must be positive, got {step}")
    point = np.asarray(seed, dtype=float)
    if not grid.contains(point):
        raise LayoutError(f"seed {point.tolist()} lies outside the grid")

    points = [point]
    travelled = 0.0
    max_steps = int(math.ceil(max_length / step)) + 1
    for _ in range(max_steps):
        remaining = max_length - travelled
        if remaining <= 1e-12 * max(1.0, max_length):
            break
        k1 = _direction(grid, point)
        if not k1.any():
            break
        h = min(step, remaining)
        k2 = _direction(grid, point + 0.5 * h * k1)
        k3 = _direction(grid, point + 0.5 * h * k2)
        k4 = _direction(grid, point + h * k3)
        candidate = point + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not grid.contains(candidate, tol=0.0):
            break
        point = candidate
        points.append(point)
        travelled += h
    return np.vstack(points)


def integrate_streamlines(
    grid: FieldGrid,
    seeds: Sequence[Sequence[float]],
    step: float,
    max_length: float,
) -> List[np.ndarray]:
    """One polyline per seed, in seed order."""
    lines = [trace_streamline(grid, seed, step, max_length) for seed in seeds]
    logger.debug(f"🌬️ Traced {len(lines)} streamline(s), {sum(len(l) for l in lines)} point(s)")
    return lines


__all__ = ["STAGNATION_SPEED", "trace_streamline", "integrate_streamlines"]
