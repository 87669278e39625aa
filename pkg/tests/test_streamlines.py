"""Streamline tracing through vector grids."""

import numpy as np
import pytest

from src.datasets.grid import FieldGrid
from src.errors import LayoutError
from src.layout.streamlines import integrate_streamlines, trace_streamline


def vector_grid(func, lower, upper, n) -> FieldGrid:
    """Sample ``func(x, y, z) -> (vx, vy, vz)`` on a regular lattice."""
    axes = [np.linspace(lo, hi, k) for lo, hi, k in zip(lower, upper, n)]
    x, y, z = np.meshgrid(*axes, indexing="ij")
    values = np.stack(func(x, y, z), axis=-1)
    spacing = [(hi - lo) / (k - 1) for lo, hi, k in zip(lower, upper, n)]
    return FieldGrid(lower, spacing, n, values)


def rotation(x, y, z):
    return -y, x, np.zeros_like(z)


def uniform(x, y, z):
    return np.ones_like(x), np.zeros_like(y), np.zeros_like(z)


def test_rotation_field_keeps_the_radius():
    grid = vector_grid(rotation, (-3, -3, 0), (3, 3, 1), (7, 7, 2))
    line = trace_streamline(grid, (1.5, 0.0, 0.5), step=0.05, max_length=5.0)
    radii = np.linalg.norm(line[:, :2], axis=1)
    assert np.max(np.abs(radii - 1.5)) <= 1e-6
    assert line[:, 2] == pytest.approx(np.full(len(line), 0.5))


def test_full_turn_around_the_unit_circle():
    grid = vector_grid(rotation, (-3, -3, -1), (3, 3, 1), (7, 7, 3))
    line = trace_streamline(grid, (1.0, 0.0, 0.0), step=0.01, max_length=2 * np.pi)
    radii = np.linalg.norm(line[:, :2], axis=1)
    assert np.max(np.abs(radii - 1.0)) <= 1e-6
    assert np.max(np.abs(line[:, 2])) == 0.0
    assert line[-1] == pytest.approx([1.0, 0.0, 0.0], abs=1e-6)


def test_length_is_capped():
    grid = vector_grid(rotation, (-3, -3, 0), (3, 3, 1), (7, 7, 2))
    line = trace_streamline(grid, (1.5, 0.0, 0.5), step=0.05, max_length=5.0)
    assert len(line) == 101
    arc = np.linalg.norm(np.diff(line, axis=0), axis=1).sum()
    assert arc == pytest.approx(5.0, rel=1e-3)


def test_uniform_field_stops_at_the_grid_boundary():
    grid = vector_grid(uniform, (0, 0, 0), (4, 1, 1), (5, 2, 2))
    line = trace_streamline(grid, (0.0, 0.5, 0.5), step=0.5, max_length=10.0)
    assert len(line) == 9
    assert line[-1] == pytest.approx([4.0, 0.5, 0.5])


def test_uniform_field_runs_straight_to_the_length():
    grid = vector_grid(uniform, (0, 0, 0), (10, 1, 1), (11, 2, 2))
    line = trace_streamline(grid, (0.0, 0.5, 0.5), step=0.1, max_length=5.0)
    assert len(line) == 51
    assert np.max(np.abs(line[:, 1:] - 0.5)) <= 1e-12
    assert line[-1] == pytest.approx([5.0, 0.5, 0.5], abs=1e-9)


def test_last_step_is_shortened_to_the_length():
    grid = vector_grid(uniform, (0, 0, 0), (4, 1, 1), (5, 2, 2))
    line = trace_streamline(grid, (0.0, 0.5, 0.5), step=0.5, max_length=1.2)
    assert line[:, 0] == pytest.approx([0.0, 0.5, 1.0, 1.2])


def test_stagnant_field_returns_the_seed():
    grid = vector_grid(lambda x, y, z: (0 * x, 0 * y, 0 * z), (0, 0, 0), (1, 1, 1), (2, 2, 2))
    line = trace_streamline(grid, (0.5, 0.5, 0.5), step=0.1, max_length=1.0)
    assert line.tolist() == [[0.5, 0.5, 0.5]]


def test_one_line_per_seed_in_order():
    grid = vector_grid(uniform, (0, 0, 0), (4, 1, 1), (5, 2, 2))
    lines = integrate_streamlines(grid, [(0, 0.2, 0.5), (0, 0.8, 0.5)], step=1.0, max_length=2.0)
    assert [line[0, 1] for line in lines] == [0.2, 0.8]
    assert [len(line) for line in lines] == [3, 3]


def test_seed_outside_the_grid_fails():
    grid = vector_grid(uniform, (0, 0, 0), (4, 1, 1), (5, 2, 2))
    with pytest.raises(LayoutError, match="outside the grid"):
        trace_streamline(grid, (5.0, 0.5, 0.5), step=0.1, max_length=1.0)


@pytest.mark.parametrize("step", [0.0, -0.1, float("inf")])
def test_step_must_be_positive(step):
    grid = vector_grid(uniform, (0, 0, 0), (4, 1, 1), (5, 2, 2))
    with pytest.raises(LayoutError, match="step must be positive"):
        trace_streamline(grid, (0.0, 0.5, 0.5), step=step, max_length=1.0)


def test_scalar_grids_are_rejected():
    grid = FieldGrid.from_flat((0, 0, 0), (1, 1, 1), (2, 2, 2), range(8))
    with pytest.raises(LayoutError, match="vector grid"):
        trace_streamline(grid, (0.5, 0.5, 0.5), step=0.1, max_length=1.0)
