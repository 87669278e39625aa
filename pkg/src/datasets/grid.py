"""
Regular 3D field grids: file format, trilinear interpolation, resampling.

File format::

    origin= 0 0 0
    spacing= 1 1 1
    dims= 2 2 2
    v0 v1 v2 ...

Values are whitespace separated, x fastest, then y, then z. A vector grid
lists three components per node.
"""

import math
import re
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from src.errors import GridFieldError

_HEADER = re.compile(r"^\s*(origin|spacing|dims)\s*=\s*(.*)$")


@dataclass
class FieldGrid:
    """
    Dense scalar or vector samples on a regular lattice.

    ``values`` has shape (nx, ny, nz) for scalar grids and (nx, ny, nz, 3)
    for vector grids.
    """
    origin: np.ndarray
    spacing: np.ndarray
    dims: Tuple[int, int, int]
    values: np.ndarray

    def __post_init__(self):
        self.origin = np.asarray(self.origin, dtype=float)
        self.spacing = np.asarray(self.spacing, dtype=float)
        self.dims = tuple(int(d) for d in self.dims)
        self.values = np.asarray(self.values, dtype=float)
        if self.origin.shape != (3,) or self.spacing.shape != (3,) or len(self.dims) != 3:
            raise GridFieldError("origin, spacing and dims need three components each")
        if not np.all(np.isfinite(self.origin)):
            raise GridFieldError("origin must be finite")
        if not np.all(self.spacing > 0) or not np.all(np.isfinite(self.spacing)):
            raise GridFieldError(f"spacing must be positive, got {self.spacing.tolist()}")
        if any(d <= 0 for d in self.dims):
            raise GridFieldError(f"dims must be positive, got {list(self.dims)}")
        if self.values.shape not in (self.dims, self.dims + (3,)):
            raise GridFieldError(f"values shape {self.values.shape} does not match dims {self.dims}")
        if not np.all(np.isfinite(self.values)):
            raise GridFieldError("grid values must be finite")

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def from_flat(cls, origin, spacing, dims, flat: Sequence[float]) -> "FieldGrid":
        """
        Build from x-fastest flat values; scalar vs vector is inferred from
        the value count.

        Raises:
            GridFieldError: If the count is neither n nor 3n
        """
        dims = tuple(int(d) for d in dims)
        n = dims[0] * dims[1] * dims[2]
        flat = np.asarray(flat, dtype=float)
        nx, ny, nz = dims
        if flat.size == n:
            values = flat.reshape(nz, ny, nx).transpose(2, 1, 0)
        elif flat.size == 3 * n:
            values = flat.reshape(nz, ny, nx, 3).transpose(2, 1, 0, 3)
        else:
            raise GridFieldError(
                f"value count mismatch: dims {nx}x{ny}x{nz} need {n} scalar or {3 * n} vector values, "
                f"got {flat.size}"
            )
        return cls(origin, spacing, dims, values)

    @property
    def is_vector(self) -> bool:
        return self.values.ndim == 4

    @property
    def node_count(self) -> int:
        return self.dims[0] * self.dims[1] * self.dims[2]

    def flat_values(self) -> np.ndarray:
        """Values in file order (x fastest)."""
        if self.is_vector:
            return self.values.transpose(2, 1, 0, 3).reshape(-1)
        return self.values.transpose(2, 1, 0).reshape(-1)

    def indices(self) -> Iterator[Tuple[int, int, int]]:
        """Node indices in file order."""
        nx, ny, nz = self.dims
        for k in range(nz):
            for j in range(ny):
                for i in range(nx):
                    yield i, j, k

    def node_position(self, i: int, j: int, k: int) -> np.ndarray:
        return self.origin + self.spacing * np.array([i, j, k], dtype=float)

    def value_at_index(self, i: int, j: int, k: int):
        value = self.values[i, j, k]
        return value.copy() if self.is_vector else float(value)

    # ------------------------------------------------------------------
    # Geometry
    # ------------------------------------------------------------------

    @property
    def upper(self) -> np.ndarray:
        return self.origin + self.spacing * (np.array(self.dims, dtype=float) - 1)

    def bounds(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.origin.copy(), self.upper

    def contains(self, point, tol: float = 1e-9) -> bool:
        p = np.asarray(point, dtype=float)
        return bool(np.all(p >= self.origin - tol) and np.all(p <= self.upper + tol))

    def interpolate(self, point):
        """
        Trilinear interpolation; points are clamped to the grid box.

        Returns:
            float for scalar grids, array of 3 for vector grids
        """
        f = (np.asarray(point, dtype=float) - self.origin) / self.spacing
        dims = np.array(self.dims)
        f = np.clip(f, 0.0, dims - 1)
        i0 = np.minimum(np.floor(f).astype(int), np.maximum(dims - 2, 0))
        t = f - i0
        i1 = np.minimum(i0 + 1, dims - 1)
        result = 0.0
        for corner in range(8):
            pick = [(corner >> axis) & 1 for axis in range(3)]
            weight = 1.0
            idx = []
            for axis in range(3):
                if pick[axis]:
                    weight *= t[axis]
                    idx.append(i1[axis])
                else:
                    weight *= 1.0 - t[axis]
                    idx.append(i0[axis])
            if weight:
                result = result + weight * self.values[idx[0], idx[1], idx[2]]
        return result if self.is_vector else float(result)

    # ------------------------------------------------------------------
    # Fields from scattered samples
    # ------------------------------------------------------------------

    @classmethod
    def from_samples(cls, points, values, tol: float = 1e-9) -> Optional["FieldGrid"]:
        """
        Rebuild a grid when sample points form a complete regular lattice.

        Returns:
            FieldGrid, or None if the points are not a full lattice
        """
        pts = np.asarray(points, dtype=float).reshape(-1, 3)
        vals = np.asarray(values, dtype=float)
        if len(pts) == 0:
            return None
        axes = []
        for axis in range(3):
            coords = np.unique(np.round(pts[:, axis] / tol) * tol)
            axes.append(coords)
        dims = tuple(len(a) for a in axes)
        if dims[0] * dims[1] * dims[2] != len(pts):
            return None
        spacing = []
        for coords in axes:
            if len(coords) == 1:
                spacing.append(1.0)
                continue
            steps = np.diff(coords)
            if np.max(np.abs(steps - steps[0])) > max(tol, 1e-9 * abs(steps[0])) * 10:
                return None
            spacing.append(float(steps[0]))
        origin = np.array([a[0] for a in axes])
        spacing = np.array(spacing)
        idx = np.rint((pts - origin) / spacing).astype(int)
        shape = dims + ((3,) if vals.ndim == 2 else ())
        grid = np.full(shape, np.nan)
        seen = np.zeros(dims, dtype=bool)
        for (i, j, k), v in zip(idx, vals):
            if seen[i, j, k]:
                return None
            seen[i, j, k] = True
            grid[i, j, k] = v
        if not seen.all():
            return None
        return cls(origin, spacing, dims, grid)

    @classmethod
    def resample_idw(cls, points, values, origin, spacing, dims, power: float = 2.0) -> "FieldGrid":
        """
        Inverse-distance-weighted resampling of scattered scalar samples
        onto a lattice (all samples contribute to every node).

        Raises:
            GridFieldError: If there are no samples
        """
        pts = np.asarray(points, dtype=float).reshape(-1, 3)
        vals = np.asarray(values, dtype=float).reshape(-1)
        if len(pts) == 0:
            raise GridFieldError("cannot resample an empty sample set")
        lattice = cls(origin, spacing, dims, np.zeros(tuple(int(d) for d in dims)))
        nx, ny, nz = lattice.dims
        gx, gy, gz = np.meshgrid(
            lattice.origin[0] + lattice.spacing[0] * np.arange(nx),
            lattice.origin[1] + lattice.spacing[1] * np.arange(ny),
            lattice.origin[2] + lattice.spacing[2] * np.arange(nz),
            indexing="ij",
        )
        nodes = np.stack([gx, gy, gz], axis=-1).reshape(-1, 3)
        dist = np.linalg.norm(nodes[:, None, :] - pts[None, :, :], axis=2)
        exact = dist < 1e-12
        with np.errstate(divide="ignore"):
            weights = 1.0 / dist ** power
        weights[exact] = 0.0
        result = (weights @ vals) / np.where(weights.sum(axis=1) > 0, weights.sum(axis=1), 1.0)
        hit_rows = exact.any(axis=1)
        if hit_rows.any():
            first_hit = exact.argmax(axis=1)
            result[hit_rows] = vals[first_hit[hit_rows]]
        return cls(lattice.origin, lattice.spacing, lattice.dims, result.reshape(nx, ny, nz))


# ============================================================================
# File format
# ============================================================================


def _format(value: float) -> str:
    value = float(value)
    return str(int(value)) if value.is_integer() and abs(value) < 1e15 else repr(value)


def read_grid_field(text: str) -> FieldGrid:
    """
    Parse the grid field file format.

    Raises:
        GridFieldError: On missing headers, bad numbers, non-positive
            spacing or dims, or a value count mismatch
    """
    header = {}
    body = []
    for number, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        match = _HEADER.match(stripped)
        if match:
            key, rest = match.groups()
            if key in header:
                raise GridFieldError(f"line {number}: duplicate '{key}=' header")
            parts = rest.split()
            if len(parts) != 3:
                raise GridFieldError(f"line {number}: '{key}=' needs 3 numbers")
            header[key] = parts
            continue
        if len(header) < 3:
            raise GridFieldError(f"line {number}: values before origin=/spacing=/dims= headers")
        body.extend(stripped.split())

    for key in ("origin", "spacing", "dims"):
        if key not in header:
            raise GridFieldError(f"missing '{key}=' header")
    try:
        origin = [float(v) for v in header["origin"]]
        spacing = [float(v) for v in header["spacing"]]
        values = [float(v) for v in body]
    except ValueError as e:
        raise GridFieldError(f"non-numeric grid entry: {e}") from None
    try:
        dims = [int(v) for v in header["dims"]]
    except ValueError:
        raise GridFieldError(f"dims must be integers, got {' '.join(header['dims'])}") from None
    if any(s <= 0 or not math.isfinite(s) for s in spacing):
        raise GridFieldError(f"spacing must be positive, got {' '.join(header['spacing'])}")
    if any(d <= 0 for d in dims):
        raise GridFieldError(f"dims must be positive integers, got {' '.join(header['dims'])}")
    return FieldGrid.from_flat(origin, spacing, dims, values)


def write_grid_field(grid: FieldGrid) -> str:
    """Serialize a grid; re-reading reproduces identical samples."""
    lines = [
        "origin= " + " ".join(_format(v) for v in grid.origin),
        "spacing= " + " ".join(_format(v) for v in grid.spacing),
        "dims= " + " ".join(str(d) for d in grid.dims),
    ]
    flat = grid.flat_values()
    per_line = 3 * grid.dims[0] if grid.is_vector else grid.dims[0]
    for start in range(0, len(flat), per_line):
        lines.append(" ".join(_format(v) for v in flat[start:start + per_line]))
    return "\n".join(lines) + "\n"
