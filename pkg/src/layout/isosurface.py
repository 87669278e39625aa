"""
Isosurface extraction from scalar grids by marching cubes.

A corner whose value is at or below the level counts as inside. Edge
vertices are interpolated from the inside corner and shared between the
cells that meet at the edge; a vertex that falls exactly on a grid node is
shared by every edge leaving that node.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from src.datasets.grid import FieldGrid
from src.errors import LayoutError
from src.layout.mc_tables import CORNER_OFFSETS, EDGE_CORNERS, TRIANGLES
from src.logging import logger

GridIndex = Tuple[int, int, int]

# Triangles at or below this area (relative to a squared cell spacing) are dropped
_DEGENERATE = 1e-14


@dataclass
class Mesh:
    """
    Triangle mesh of one isosurface level.

    ``edges[i]`` holds the two grid nodes of the cell edge vertex ``i`` was
    interpolated on (inside node first).
    """
    level: float
    vertices: np.ndarray = field(default_factory=lambda: np.zeros((0, 3)))
    triangles: np.ndarray = field(default_factory=lambda: np.zeros((0, 3), dtype=int))
    edges: np.ndarray = field(default_factory=lambda: np.zeros((0, 2, 3), dtype=int))

    @property
    def is_empty(self) -> bool:
        return len(self.triangles) == 0

    def area(self) -> float:
        if self.is_empty:
            return 0.0
        a, b, c = (self.vertices[self.triangles[:, i]] for i in range(3))
        return float(0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1).sum())

    def bounds(self) -> Tuple[np.ndarray, np.ndarray]:
        if len(self.vertices) == 0:
            raise LayoutError(f"empty mesh at level {self.level} has no bounds")
        return self.vertices.min(axis=0), self.vertices.max(axis=0)


def _cube_indices(values: np.ndarray, level: float) -> np.ndarray:
    inside = (values <= level).astype(np.int32)
    nx, ny, nz = values.shape
    index = np.zeros((nx - 1, ny - 1, nz - 1), dtype=np.int32)
    for corner, (dx, dy, dz) in enumerate(CORNER_OFFSETS):
        index |= inside[dx:nx - 1 + dx, dy:ny - 1 + dy, dz:nz - 1 + dz] << corner
    return index


class _LevelExtractor:
    def __init__(self, grid: FieldGrid, level: float):
        self.grid = grid
        self.level = level
        self.values = grid.values
        self.keys: Dict[tuple, int] = {}
        self.vertices: List[np.ndarray] = []
        self.edges: List[Tuple[GridIndex, GridIndex]] = []

    def vertex(self, cell: np.ndarray, edge: int) -> int:
        a, b = EDGE_CORNERS[edge]
        pa = tuple(int(v) for v in cell + CORNER_OFFSETS[a])
        pb = tuple(int(v) for v in cell + CORNER_OFFSETS[b])
        va, vb = self.values[pa], self.values[pb]
        inner, outer = (pa, pb) if va <= self.level else (pb, pa)
        v_in, v_out = self.values[inner], self.values[outer]
        key = ("node", inner) if v_in == self.level else ("edge",) + tuple(sorted((pa, pb)))
        found = self.keys.get(key)
        if found is not None:
            return found
        p_in = self.grid.node_position(*inner)
        p_out = self.grid.node_position(*outer)
        t = (self.level - v_in) / (v_out - v_in)
        self.keys[key] = len(self.vertices)
        self.vertices.append(p_in + t * (p_out - p_in))
        self.edges.append((inner, outer))
        return self.keys[key]

    def run(self) -> Mesh:
        if self.values.ndim != 3:
            raise LayoutError("isosurfaces need a scalar grid")
        if any(d < 2 for d in self.grid.dims):
            return Mesh(level=self.level)
        cubes = _cube_indices(self.values, self.level)
        active = np.argwhere((cubes != 0) & (cubes != 255))
        scale = float(np.min(self.grid.spacing)) ** 2
        triangles = []
        for cell in active:
            row = TRIANGLES[cubes[tuple(cell)]]
            for start in range(0, 15, 3):
                if row[start] < 0:
                    break
                tri = [self.vertex(cell, int(e)) for e in row[start:start + 3]]
                if len(set(tri)) < 3:
                    continue
                p0, p1, p2 = (self.vertices[i] for i in tri)
                if 0.5 * np.linalg.norm(np.cross(p1 - p0, p2 - p0)) <= _DEGENERATE * scale:
                    continue
                triangles.append(tri)
        if not triangles:
            return Mesh(level=self.level)
        # keep only vertices referenced by a kept triangle
        tri = np.asarray(triangles, dtype=int)
        used = np.unique(tri)
        remap = np.full(len(self.vertices), -1, dtype=int)
        remap[used] = np.arange(len(used))
        return Mesh(
            level=self.level,
            vertices=np.asarray(self.vertices)[used],
            triangles=remap[tri],
            edges=np.asarray(self.edges, dtype=int)[used],
        )


def extract_isosurface(grid: FieldGrid, level: float) -> Mesh:
    """Marching-cubes mesh of one level (possibly empty)."""
    if not np.isfinite(level):
        raise LayoutError(f"isosurface level must be finite, got {level}")
    return _LevelExtractor(grid, float(level)).run()


def compute_isosurface(grid: FieldGrid, levels: Sequence[float]) -> List[Tuple[float, Mesh]]:
    """
    One mesh per level, in the order given.

    Args:
        grid: Scalar field grid
        levels: Finite isovalues

    Returns:
        List of (level, Mesh); meshes may be empty
    """
    results = []
    for level in levels:
        mesh = extract_isosurface(grid, level)
        logger.debug(f"🧊 Level {level}: {len(mesh.vertices)} vertices, {len(mesh.triangles)} triangles")
        results.append((float(level), mesh))
    return results


__all__ = ["Mesh", "extract_isosurface", "compute_isosurface"]
