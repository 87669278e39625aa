"""
Geometry index built from the city model graph.

Holds the numeric side of the model (rings as coordinate tuples) so the
layout manager never has to parse posList text.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple, Union

import numpy as np

from src.citymodel.citygml import CityModelGraph
from src.errors import GeometryError, PosListError
from src.logging import logger
from src.rdf.graph import Graph
from src.rdf.terms import IRI, Literal, Node, RDF_TYPE, cgml, gml, viz

Point = Tuple[float, float, float]
Ring = Tuple[Point, ...]

ROLES = ("ground", "roof", "wall", "window", "other")

SURFACE_ROLES = {
    cgml("GroundSurface"): "ground",
    cgml("RoofSurface"): "roof",
    cgml("WallSurface"): "wall",
    cgml("ClosureSurface"): "other",
    cgml("Window"): "window",
    cgml("Door"): "other",
}

BUILDING = cgml("Building")
POLYGON = gml("Polygon")
LINEAR_RING = gml("LinearRing")
EXTERIOR = gml("exterior")
POSLIST = gml("posList")

# |normal.z| thresholds used to classify surfaces of lod1 solids
_HORIZONTAL = 0.9
_VERTICAL = 0.1


@dataclass(frozen=True)
class Surface:
    """
    One planar polygon of a city object.

    Rings are stored without the closing duplicate vertex; ``closed`` marks
    them as implicitly closed.
    """
    role: str
    rings: Tuple[Ring, ...]
    node: Node
    closed: bool = True

    @property
    def exterior(self) -> Ring:
        return self.rings[0]

    def vertices(self) -> np.ndarray:
        return np.asarray(self.exterior, dtype=float)


@dataclass
class CityObjectEntry:
    """Surfaces of one city object, keyed by the object's node."""
    node: Node
    kind: str
    surfaces: List[Surface] = field(default_factory=list)

    def by_role(self, role: str) -> List[Surface]:
        return [s for s in self.surfaces if s.role == role]

    @property
    def ground(self) -> List[Surface]:
        return self.by_role("ground")

    @property
    def roof(self) -> List[Surface]:
        return self.by_role("roof")

    @property
    def walls(self) -> List[Surface]:
        return self.by_role("wall")

    @property
    def windows(self) -> List[Surface]:
        return self.by_role("window")

    def all_vertices(self) -> np.ndarray:
        if not self.surfaces:
            return np.zeros((0, 3))
        return np.vstack([s.vertices() for s in self.surfaces])

    @property
    def name(self) -> str:
        return self.node.local_name if isinstance(self.node, IRI) else f"_:{self.node.label}"


@dataclass
class GeometryIndex:
    """
    Buildings (exactly one entry per Building node) plus every identified
    object carrying polygons (surfaces, windows, building parts).
    """
    buildings: Dict[Node, CityObjectEntry] = field(default_factory=dict)
    objects: Dict[Node, CityObjectEntry] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.buildings)

    def __iter__(self) -> Iterator[CityObjectEntry]:
        return iter(self.buildings.values())

    def __getitem__(self, key: Union[str, Node]) -> CityObjectEntry:
        entry = self.resolve(key)
        if entry is None:
            raise KeyError(key)
        return entry

    def __contains__(self, key) -> bool:
        return self.resolve(key) is not None

    def resolve(self, key: Union[str, Node]) -> Optional[CityObjectEntry]:
        """Entry for a building or identified object; a plain string is a gml:id."""
        node = viz(key) if isinstance(key, str) else key
        return self.buildings.get(node) or self.objects.get(node)


# ============================================================================
# Ring parsing
# ============================================================================


def parse_poslist(text: str, where: str = "") -> Ring:
    """
    Parse posList text into a ring without the closing duplicate.

    Raises:
        PosListError: On non-numeric tokens or a length not divisible by 3
        GeometryError: On non-finite values or fewer than 3 distinct vertices
    """
    tokens = text.split()
    try:
        values = [float(t) for t in tokens]
    except ValueError as e:
        raise PosListError(f"unparsable posList{where}: {e}") from None
    if len(values) % 3:
        raise PosListError(f"posList{where} has {len(values)} values, not a multiple of 3")
    if not all(math.isfinite(v) for v in values):
        raise GeometryError(f"posList{where} contains non-finite coordinates")
    points = [tuple(values[i:i + 3]) for i in range(0, len(values), 3)]
    if len(points) > 1 and points[0] == points[-1]:
        points = points[:-1]
    if len(set(points)) < 3:
        raise GeometryError(f"ring{where} has fewer than 3 distinct vertices")
    return tuple(points)


def _newell_normal(ring: Ring) -> np.ndarray:
    pts = np.asarray(ring, dtype=float)
    nxt = np.roll(pts, -1, axis=0)
    normal = np.array([
        np.sum((pts[:, 1] - nxt[:, 1]) * (pts[:, 2] + nxt[:, 2])),
        np.sum((pts[:, 2] - nxt[:, 2]) * (pts[:, 0] + nxt[:, 0])),
        np.sum((pts[:, 0] - nxt[:, 0]) * (pts[:, 1] + nxt[:, 1])),
    ])
    length = np.linalg.norm(normal)
    return normal / length if length > 0 else normal


def _role_from_normal(ring: Ring) -> str:
    nz = _newell_normal(ring)[2]
    if nz <= -_HORIZONTAL:
        return "ground"
    if nz >= _HORIZONTAL:
        return "roof"
    if abs(nz) <= _VERTICAL:
        return "wall"
    return "other"


# ============================================================================
# Extraction
# ============================================================================


class _Extractor:
    def __init__(self, graph: Graph):
        self.graph = graph
        self.index = GeometryIndex()

    def kind_of(self, node: Node) -> Optional[IRI]:
        types = self.graph.types(node)
        return types[0] if types else None

    def polygon_surface(self, polygon: Node, role: Optional[str]) -> Surface:
        # Polygon -exterior-> LinearRing -posList-> text
        ring_text = None
        for linear_ring in self.graph.objects(polygon, EXTERIOR):
            ring_text = self.graph.value(linear_ring, POSLIST)
        where = f" of {polygon}"
        if not isinstance(ring_text, Literal) or ring_text.is_number:
            raise GeometryError(f"polygon{where} has no exterior posList")
        ring = parse_poslist(ring_text.value, where)
        return Surface(role=role or _role_from_normal(ring), rings=(ring,), node=polygon)

    def walk(self, node: Node, role: Optional[str], owners: List[CityObjectEntry], seen: set) -> None:
        if node in seen:
            return
        seen.add(node)
        kind = self.kind_of(node)
        if kind in SURFACE_ROLES:
            role = SURFACE_ROLES[kind]
        if kind == POLYGON:
            surface = self.polygon_surface(node, role)
            for owner in owners:
                owner.surfaces.append(surface)
            if isinstance(node, IRI):
                self.index.objects.setdefault(node, CityObjectEntry(node, "Polygon", [surface]))
            return
        if kind == BUILDING and node is not owners[0].node:
            # nested buildings are indexed on their own
            return
        if isinstance(node, IRI) and kind is not None and kind != BUILDING and kind != LINEAR_RING:
            entry = self.index.objects.setdefault(node, CityObjectEntry(node, kind.local_name))
            owners = owners + [entry]
        for triple in self.graph.triples(node, None, None):
            if triple.predicate == RDF_TYPE or isinstance(triple.object, Literal):
                continue
            self.walk(triple.object, role, owners, seen)

    def run(self) -> GeometryIndex:
        for building in self.graph.subjects(RDF_TYPE, BUILDING):
            entry = CityObjectEntry(building, "Building")
            self.index.buildings[building] = entry
            self.walk(building, None, [entry], set())
        # keep only objects that carry geometry
        self.index.objects = {k: v for k, v in self.index.objects.items() if v.surfaces}
        return self.index


def extract_geometry_index(model: Union[CityModelGraph, Graph]) -> GeometryIndex:
    """
    Build the geometry index from a converted city model.

    Surface roles come from the nearest enclosing boundary surface type;
    polygons outside any boundary surface (lod1 solids) are classified by
    their normal.

    Raises:
        PosListError: On an unparsable posList
        GeometryError: On rings with fewer than 3 distinct vertices
    """
    graph = model.graph if isinstance(model, CityModelGraph) else model
    index = _Extractor(graph).run()
    surfaces = sum(len(e.surfaces) for e in index)
    logger.info(f"📐 Geometry index: {len(index.buildings)} building(s), {surfaces} surface(s)")
    return index
