"""
Synthetic fixture generator.

Writes a grid of LOD2 gabled-roof buildings with windows as CityGML, a
reference dictionary, one dataset per data case, scalar and vector grid
fields, copies of the built-in techniques and ready-to-run pipeline configs.
Output depends only on the building count.
"""

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import numpy as np
from lxml import etree

from src.cli.stages import write_text
from src.datasets import FieldGrid, write_grid_field
from src.errors import ConfigError
from src.logging import logger
from src.techniques import LIBRARY_DIR, library_names
from src.utils.numbers import format_number

NS_CORE = "http://www.opengis.net/citygml/2.0"
NS_BLDG = "http://www.opengis.net/citygml/building/2.0"
NS_GML = "http://www.opengis.net/gml"
NSMAP = {"core": NS_CORE, "bldg": NS_BLDG, "gml": NS_GML}

STOREY_HEIGHT = 3.0
ROOF_RISE = 3.0
BLOCK = 30.0
PER_ROW = 10
WINDOW_WIDTH = 1.2
WINDOW_SILL = 0.9
WINDOW_HEIGHT = 1.5
WINDOW_SLOT = 3.0
WINDOW_OFFSET = 0.05

Vec3 = Tuple[float, float, float]


def _core(tag: str) -> str:
    return f"{{{NS_CORE}}}{tag}"


def _bldg(tag: str) -> str:
    return f"{{{NS_BLDG}}}{tag}"


def _gml(tag: str) -> str:
    return f"{{{NS_GML}}}{tag}"


@dataclass(frozen=True)
class HouseSpec:
    """Footprint origin and dimensions of one synthetic building."""
    number: int
    x: float
    y: float
    width: float
    depth: float
    storeys: int

    @property
    def gml_id(self) -> str:
        return f"bldg-{self.number}"

    @property
    def eave(self) -> float:
        return self.storeys * STOREY_HEIGHT

    @property
    def ridge(self) -> float:
        return self.eave + ROOF_RISE


def house_specs(count: int) -> List[HouseSpec]:
    specs = []
    for i in range(count):
        specs.append(HouseSpec(
            number=i + 1,
            x=(i % PER_ROW) * BLOCK,
            y=(i // PER_ROW) * BLOCK,
            width=12.0 + 3.0 * (i % 3),
            depth=9.0 + 3.0 * (i % 2),
            storeys=4 + i % 3,
        ))
    return specs


# ============================================================================
# Geometry
# ============================================================================


def _poslist(ring: Sequence[Vec3]) -> str:
    closed = list(ring) + [ring[0]]
    return " ".join(format_number(round(c, 6)) for point in closed for c in point)


def _walls(h: HouseSpec) -> List[Tuple[str, Vec3, Vec3, float, bool]]:
    """(side, start corner, along-wall direction, length, gable) seen from outside."""
    x0, y0, x1, y1 = h.x, h.y, h.x + h.width, h.y + h.depth
    return [
        ("south", (x0, y0, 0.0), (1.0, 0.0, 0.0), h.width, False),
        ("east", (x1, y0, 0.0), (0.0, 1.0, 0.0), h.depth, True),
        ("north", (x1, y1, 0.0), (-1.0, 0.0, 0.0), h.width, False),
        ("west", (x0, y1, 0.0), (0.0, -1.0, 0.0), h.depth, True),
    ]


def _along(start: Vec3, direction: Vec3, distance: float, z: float, outward: float = 0.0) -> Vec3:
    # outward normal of a wall is (dy, -dx) for along-wall direction (dx, dy)
    nx, ny = direction[1], -direction[0]
    return (
        start[0] + direction[0] * distance + nx * outward,
        start[1] + direction[1] * distance + ny * outward,
        z,
    )


def wall_ring(h: HouseSpec, start: Vec3, direction: Vec3, length: float, gable: bool) -> List[Vec3]:
    ring = [
        _along(start, direction, 0.0, 0.0),
        _along(start, direction, length, 0.0),
        _along(start, direction, length, h.eave),
    ]
    if gable:
        ring.append(_along(start, direction, length / 2, h.ridge))
    ring.append(_along(start, direction, 0.0, h.eave))
    return ring


def window_rings(h: HouseSpec, start: Vec3, direction: Vec3, length: float) -> List[List[Vec3]]:
    slots = int(length // WINDOW_SLOT)
    margin = (length - slots * WINDOW_SLOT) / 2
    rings = []
    for storey in range(h.storeys):
        bottom = storey * STOREY_HEIGHT + WINDOW_SILL
        top = bottom + WINDOW_HEIGHT
        for slot in range(slots):
            left = margin + slot * WINDOW_SLOT + (WINDOW_SLOT - WINDOW_WIDTH) / 2
            right = left + WINDOW_WIDTH
            rings.append([
                _along(start, direction, left, bottom, WINDOW_OFFSET),
                _along(start, direction, right, bottom, WINDOW_OFFSET),
                _along(start, direction, right, top, WINDOW_OFFSET),
                _along(start, direction, left, top, WINDOW_OFFSET),
            ])
    return rings


def roof_rings(h: HouseSpec) -> List[List[Vec3]]:
    x0, y0, x1, y1 = h.x, h.y, h.x + h.width, h.y + h.depth
    ym = y0 + h.depth / 2
    return [
        [(x0, y0, h.eave), (x1, y0, h.eave), (x1, ym, h.ridge), (x0, ym, h.ridge)],
        [(x1, y1, h.eave), (x0, y1, h.eave), (x0, ym, h.ridge), (x1, ym, h.ridge)],
    ]


def ground_ring(h: HouseSpec) -> List[Vec3]:
    x0, y0, x1, y1 = h.x, h.y, h.x + h.width, h.y + h.depth
    return [(x0, y0, 0.0), (x0, y1, 0.0), (x1, y1, 0.0), (x1, y0, 0.0)]


# ============================================================================
# CityGML document
# ============================================================================


def _multi_surface(parent, lod_property: str, ring: Sequence[Vec3]) -> None:
    prop = etree.SubElement(parent, _bldg(lod_property))
    multi = etree.SubElement(prop, _gml("MultiSurface"))
    member = etree.SubElement(multi, _gml("surfaceMember"))
    polygon = etree.SubElement(member, _gml("Polygon"))
    exterior = etree.SubElement(polygon, _gml("exterior"))
    linear_ring = etree.SubElement(exterior, _gml("LinearRing"))
    etree.SubElement(linear_ring, _gml("posList")).text = _poslist(ring)


def _surface(building, kind: str, gml_id: str, ring: Sequence[Vec3]):
    bounded = etree.SubElement(building, _bldg("boundedBy"))
    surface = etree.SubElement(bounded, _bldg(kind), {_gml("id"): gml_id})
    _multi_surface(surface, "lod2MultiSurface", ring)
    return surface


def window_ids(h: HouseSpec) -> List[str]:
    ids = []
    for side, start, direction, length, _ in _walls(h):
        count = len(window_rings(h, start, direction, length))
        ids.extend(f"{h.gml_id}-{side}-win-{k + 1}" for k in range(count))
    return ids


def building_element(parent, h: HouseSpec):
    building = etree.SubElement(parent, _bldg("Building"), {_gml("id"): h.gml_id})
    etree.SubElement(building, _gml("name")).text = f"Building {h.number}"
    etree.SubElement(building, _bldg("measuredHeight")).text = format_number(h.ridge)
    etree.SubElement(building, _bldg("storeysAboveGround")).text = str(h.storeys)
    _surface(building, "GroundSurface", f"{h.gml_id}-ground", ground_ring(h))
    for k, ring in enumerate(roof_rings(h), 1):
        _surface(building, "RoofSurface", f"{h.gml_id}-roof-{k}", ring)
    for side, start, direction, length, gable in _walls(h):
        wall = _surface(building, "WallSurface", f"{h.gml_id}-{side}", wall_ring(h, start, direction, length, gable))
        for k, ring in enumerate(window_rings(h, start, direction, length), 1):
            opening = etree.SubElement(wall, _bldg("opening"))
            window = etree.SubElement(opening, _bldg("Window"), {_gml("id"): f"{h.gml_id}-{side}-win-{k}"})
            _multi_surface(window, "lod3MultiSurface", ring)
    return building


def city_document(specs: Sequence[HouseSpec]) -> str:
    root = etree.Element(_core("CityModel"), nsmap=NSMAP)
    etree.SubElement(root, _gml("name")).text = "synthetic city"
    for h in specs:
        building_element(etree.SubElement(root, _core("cityObjectMember")), h)
    data = etree.tostring(root, xml_declaration=True, encoding="UTF-8", pretty_print=True)
    return data.decode("utf-8")


# ============================================================================
# Datasets and grids
# ============================================================================

PEDESTRIANS = [(42, -13, 25, 0), (17, 4, -6, 0)]
POLLUTANTS = [(5.67, 5, 5, 10), (2.4, 20, 20, 5), (1.3, 35, 10, 8), (0.8, 10, 35, 12), (3.1, 25, 30, 4)]


def _csv(header: str, rows) -> str:
    lines = [header] + [",".join(str(c) for c in row) for row in rows]
    return "\n".join(lines) + "\n"


def pollution_grid() -> FieldGrid:
    """Scalar plume around (20, 20, 5); levels 1 and 2 both cross it."""
    origin, spacing, dims = np.zeros(3), np.full(3, 5.0), (9, 9, 5)
    values = np.empty(dims)
    for i, j, k in np.ndindex(*dims):
        x, y, z = origin + spacing * (i, j, k)
        d2 = (x - 20) ** 2 + (y - 20) ** 2 + (z - 5) ** 2
        values[i, j, k] = round(3.0 * math.exp(-d2 / 400.0), 6)
    return FieldGrid(origin, spacing, dims, values)


def wind_grid() -> FieldGrid:
    """Steady wind along +x with a gentle lateral wave."""
    origin, spacing, dims = np.zeros(3), np.ones(3), (11, 11, 3)
    values = np.zeros(dims + (3,))
    for i, j, k in np.ndindex(*dims):
        values[i, j, k] = (1.0, round(0.3 * math.sin(i / 2.0), 6), 0.0)
    return FieldGrid(origin, spacing, dims, values)


def dictionary_rows(specs: Sequence[HouseSpec]) -> List[Tuple[str, str]]:
    rows = []
    for h in specs:
        rows.append((f"b{h.number}", h.gml_id))
        for k, gml_id in enumerate(window_ids(h)[:2], 1):
            rows.append((f"b{h.number}-w{k}", gml_id))
    return rows


def relation_rows(specs: Sequence[HouseSpec]) -> List[Tuple[float, str, str]]:
    rows = []
    for i, h in enumerate(specs[:3]):
        other = specs[(i + 1) % len(specs)]
        rows.append((round(0.9 - 0.2 * i, 6), f"b{h.number}-w1", f"b{other.number}-w2"))
    return rows


def region_rows(specs: Sequence[HouseSpec]) -> List[Tuple[str, str]]:
    rows = []
    for h in specs[:3]:
        x0, y0 = h.x + h.width + 2, h.y
        ring = [(x0, y0, 0.0), (x0 + 6, y0, 0.0), (x0 + 6, y0 + 6, 0.0), (x0, y0 + 6, 0.0)]
        rows.append((f"street-{h.number}", _poslist(ring)))
    return rows


# ============================================================================
# Pipeline configs
# ============================================================================

PIPELINES: Dict[str, Tuple[str, List[str]]] = {
    "pedestrians": ("cone-at-point", [
        "dataset.peds.path = pedestrians.csv",
        "dataset.peds.kind = point",
        "dataset.peds.type = :PedestrianCounting",
        "dataset.peds.id-prefix = pednum",
        "dataset.peds.loc-prefix = loc",
    ]),
    "pollutants": ("sphere-at-point", [
        "dataset.pollutants.path = pollutants.csv",
        "dataset.pollutants.kind = point",
        "dataset.pollutants.type = :PollutantConcentration",
    ]),
    "notes": ("panel-near-object", [
        "dataset.notes.path = notes.csv",
        "dataset.notes.kind = object",
        "dataset.notes.type = :RichText",
        "dataset.notes.dict = dictionary.csv",
    ]),
    "intervisibility": ("line-between-objects", [
        "dataset.intervisibility.path = intervisibility.csv",
        "dataset.intervisibility.kind = relation",
        "dataset.intervisibility.type = :IntervisibilityRelation",
        "dataset.intervisibility.dict = dictionary.csv",
    ]),
    "isosurface": ("global-isosurface", [
        "dataset.pollution.path = pollution.grid",
        "dataset.pollution.kind = grid",
        "dataset.pollution.type = :PollutantConcentration",
    ]),
    "wind": ("wind-flowlines", [
        "dataset.wind.path = wind.grid",
        "dataset.wind.kind = grid",
        "dataset.wind.type = :WindVelocity",
    ]),
}


def pipeline_config(name: str) -> str:
    technique, dataset_lines = PIPELINES[name]
    lines = [
        f"# {name} pipeline",
        "model = city.gml",
        f"technique = techniques/{technique}.tech",
        f"output = out/{name}.html",
        "format = x3dom",
    ] + dataset_lines
    return "\n".join(lines) + "\n"


def make_fixtures(out_dir, buildings: int = 4) -> Dict[str, Path]:
    """
    Write every fixture file under ``out_dir``.

    Returns:
        File label -> written path
    """
    if buildings < 1:
        raise ConfigError(f"need at least one building, got {buildings}")
    out = Path(out_dir)
    specs = house_specs(buildings)
    files: Dict[str, str] = {
        "city.gml": city_document(specs),
        "dictionary.csv": _csv("ref,gml_id", dictionary_rows(specs)),
        "pedestrians.csv": _csv("value,x,y,z", PEDESTRIANS),
        "pollutants.csv": _csv("value,x,y,z", POLLUTANTS),
        "notes.csv": _csv("value,object_ref", [
            (f"Building {h.number}: {h.storeys} storeys", f"b{h.number}") for h in specs[:3]
        ]),
        "intervisibility.csv": _csv("value,arg1_ref,arg2_ref", relation_rows(specs)),
        "regions.csv": _csv("ref,poslist", region_rows(specs)),
        "noise.csv": _csv("value,region_ref", [(55 + 5 * i, ref) for i, (ref, _) in enumerate(region_rows(specs))]),
        "pollution.grid": write_grid_field(pollution_grid()),
        "wind.grid": write_grid_field(wind_grid()),
    }
    for name in library_names():
        files[f"techniques/{name}.tech"] = (LIBRARY_DIR / f"{name}.tech").read_text(encoding="utf-8")
    for name in PIPELINES:
        files[f"{name}.pipeline"] = pipeline_config(name)

    written = {}
    for label, text in files.items():
        path = out / label
        write_text(path, text)
        written[label] = path
    logger.info(f"🏗️ Wrote {len(written)} fixture file(s) with {buildings} building(s) to {out}")
    return written


__all__ = ["HouseSpec", "house_specs", "city_document", "make_fixtures", "pipeline_config", "PIPELINES"]
