"""
Placement geometry: region-to-point choice functions and the spatial
relation solvers.

All coordinates are meters in one local Cartesian frame, Z up.
"""

import math
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from src.citymodel.geometry_index import CityObjectEntry, Surface
from src.errors import LayoutError

# Below this area a ring counts as degenerate and the vertex mean is used
_AREA_EPS = 1e-12


class Point3(NamedTuple):
    """A finite 3D point."""
    x: float
    y: float
    z: float

    @classmethod
    def of(cls, values) -> "Point3":
        x, y, z = (float(v) for v in values)
        if not all(math.isfinite(v) for v in (x, y, z)):
            raise LayoutError(f"non-finite point ({x}, {y}, {z})")
        return cls(x, y, z)

    def array(self) -> np.ndarray:
        return np.array(self, dtype=float)


# ============================================================================
# Polygon moments
# ============================================================================


def newell_normal(ring: np.ndarray) -> np.ndarray:
    """Unnormalized polygon normal by Newell's method."""
    nxt = np.roll(ring, -1, axis=0)
    return np.array([
        np.sum((ring[:, 1] - nxt[:, 1]) * (ring[:, 2] + nxt[:, 2])),
        np.sum((ring[:, 2] - nxt[:, 2]) * (ring[:, 0] + nxt[:, 0])),
        np.sum((ring[:, 0] - nxt[:, 0]) * (ring[:, 1] + nxt[:, 1])),
    ])


def polygon_moments(ring) -> Tuple[np.ndarray, float]:
    """
    Area-weighted centroid and area of a planar polygon.

    Fan triangulation from the first vertex; triangle areas are signed
    against the polygon normal so non-convex rings come out right.

    Returns:
        (centroid, area); for zero-area rings the vertex mean and 0.0
    """
    pts = np.asarray(ring, dtype=float).reshape(-1, 3)
    if len(pts) == 0:
        raise LayoutError("empty region")
    if len(pts) < 3:
        return pts.mean(axis=0), 0.0
    normal = newell_normal(pts)
    length = np.linalg.norm(normal)
    if length < _AREA_EPS:
        return pts.mean(axis=0), 0.0
    unit = normal / length
    origin = pts[0]
    a = pts[1:-1] - origin
    b = pts[2:] - origin
    areas = 0.5 * np.cross(a, b) @ unit
    total = areas.sum()
    if abs(total) < _AREA_EPS:
        return pts.mean(axis=0), 0.0
    centers = (origin + pts[1:-1] + pts[2:]) / 3.0
    return (areas[:, None] * centers).sum(axis=0) / total, float(abs(total))


def region_to_point(region, mode: str = "centroid") -> Point3:
    """
    Map a region (ring or Surface) to one representative point.

    Args:
        region: Sequence of 3D points or a Surface
        mode: "centroid" (area-weighted) or "vertex-mean"

    Raises:
        LayoutError: If the region is empty
    """
    ring = region.exterior if isinstance(region, Surface) else region
    pts = np.asarray(ring, dtype=float).reshape(-1, 3)
    if len(pts) == 0:
        raise LayoutError("empty region")
    if mode == "vertex-mean":
        return Point3.of(pts.mean(axis=0))
    center, _ = polygon_moments(pts)
    return Point3.of(center)


def surfaces_centroid(surfaces: Iterable[Surface]) -> Point3:
    """Area-weighted centroid of a set of surfaces; vertex mean if all are degenerate."""
    surfaces = list(surfaces)
    if not surfaces:
        raise LayoutError("no surfaces")
    weighted = np.zeros(3)
    total = 0.0
    for surface in surfaces:
        center, area = polygon_moments(surface.exterior)
        weighted += area * center
        total += area
    if total < _AREA_EPS:
        return Point3.of(np.vstack([s.vertices() for s in surfaces]).mean(axis=0))
    return Point3.of(weighted / total)


# ============================================================================
# Relation solvers
# ============================================================================


def solve_above(building: CityObjectEntry, clearance: float = 2.0) -> Point3:
    """
    Point above a building: ground-surface barycentre in xy, highest roof
    vertex plus ``clearance`` in z.

    Raises:
        LayoutError: If the building has no roof or no ground surfaces
    """
    if not building.roof:
        raise LayoutError("no roof surfaces for the above relation", building.name)
    if not building.ground:
        raise LayoutError("no ground surfaces for the above relation", building.name)
    ground = surfaces_centroid(building.ground)
    top = max(float(s.vertices()[:, 2].max()) for s in building.roof)
    return Point3(ground.x, ground.y, top + clearance)


def solve_near(
    target: CityObjectEntry,
    footprint: Tuple[float, float] = (4.0, 2.0),
    distance: float = 2.0,
) -> Tuple[Point3, np.ndarray]:
    """
    Point in front of the largest wall of a city object.

    The wall centroid is moved ``distance`` meters along the wall's outward
    horizontal normal; z is raised so that an object of the given
    (width, height) footprint does not sink below the ground.

    Returns:
        (point, facing) where facing is the unit normal pointing back to the wall

    Raises:
        LayoutError: If the object has no wall surfaces
    """
    walls = target.walls
    if not walls:
        raise LayoutError("no wall surfaces for the near relation", target.name)
    moments = [polygon_moments(w.exterior) for w in walls]
    best = max(range(len(walls)), key=lambda i: moments[i][1])
    center = moments[best][0]

    normal = newell_normal(walls[best].vertices())
    normal[2] = 0.0
    length = np.linalg.norm(normal)
    if length < _AREA_EPS:
        raise LayoutError("largest wall is horizontal", target.name)
    normal /= length
    body = target.all_vertices().mean(axis=0)
    if np.dot(normal[:2], center[:2] - body[:2]) < 0:
        normal = -normal

    point = center + distance * normal
    ground = target.ground
    floor = min(float(s.vertices()[:, 2].min()) for s in ground) if ground \
        else float(target.all_vertices()[:, 2].min())
    point[2] = max(point[2], floor + footprint[1] / 2.0)
    return Point3.of(point), -normal


def solve_inside(target: CityObjectEntry) -> Point3:
    """Mean of all surface vertices of a city object."""
    vertices = target.all_vertices()
    if len(vertices) == 0:
        raise LayoutError("object has no surfaces", target.name)
    return Point3.of(vertices.mean(axis=0))


def object_anchor(entry: CityObjectEntry) -> Point3:
    """Area-weighted centroid of all surfaces of an object (a window's own polygon)."""
    if not entry.surfaces:
        raise LayoutError("object has no surfaces", entry.name)
    return surfaces_centroid(entry.surfaces)


def relation_endpoints(obj1: CityObjectEntry, obj2: CityObjectEntry) -> Tuple[Point3, Point3]:
    """Line endpoints for a relation between two city objects."""
    return object_anchor(obj1), object_anchor(obj2)


def facing_rotation(facing: Optional[Sequence[float]]) -> Tuple[float, float, float, float]:
    """
    Axis-angle turning an upright panel (front towards -Y) to face ``facing``.

    Only the horizontal part of ``facing`` is used.
    """
    if facing is None:
        return (0.0, 0.0, 1.0, 0.0)
    angle = math.atan2(float(facing[0]), -float(facing[1]))
    if abs(angle) < 1e-12:
        angle = 0.0
    return (0.0, 0.0, 1.0, angle)


def rotation_facing(orientation: Sequence[float]) -> np.ndarray:
    """Front normal of a panel with the given z-axis rotation (inverse of facing_rotation)."""
    angle = float(orientation[3]) if abs(float(orientation[2])) > 0 else 0.0
    return np.array([math.sin(angle), -math.cos(angle), 0.0])


__all__ = [
    "Point3",
    "newell_normal",
    "polygon_moments",
    "region_to_point",
    "surfaces_centroid",
    "solve_above",
    "solve_near",
    "solve_inside",
    "object_anchor",
    "relation_endpoints",
    "facing_rotation",
    "rotation_facing",
]
