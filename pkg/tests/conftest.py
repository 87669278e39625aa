"""Shared fixtures: a small hand-built city and the sample datasets."""

from typing import List, Sequence, Tuple

import pytest

from src.citymodel import extract_geometry_index, parse_citygml
from src.rdf import Store
from src.rdf.serialization import serialize_graph

Vec3 = Tuple[float, float, float]

HEADER = (
    '<?xml version="1.0" encoding="UTF-8"?>\n'
    '<core:CityModel xmlns:core="http://www.opengis.net/citygml/2.0"'
    ' xmlns:bldg="http://www.opengis.net/citygml/building/2.0"'
    ' xmlns:gml="http://www.opengis.net/gml">\n'
)
FOOTER = "</core:CityModel>\n"


def poslist(ring: Sequence[Vec3]) -> str:
    closed = list(ring) + [ring[0]]
    return " ".join(f"{c:g}" for point in closed for c in point)


def multi_surface(prop: str, ring: Sequence[Vec3]) -> str:
    return (
        f"<bldg:{prop}><gml:MultiSurface><gml:surfaceMember><gml:Polygon><gml:exterior>"
        f"<gml:LinearRing><gml:posList>{poslist(ring)}</gml:posList></gml:LinearRing>"
        f"</gml:exterior></gml:Polygon></gml:surfaceMember></gml:MultiSurface></bldg:{prop}>"
    )


def surface(kind: str, gml_id: str, ring: Sequence[Vec3], inner: str = "") -> str:
    return (
        f'<bldg:boundedBy><bldg:{kind} gml:id="{gml_id}">'
        f"{multi_surface('lod2MultiSurface', ring)}{inner}</bldg:{kind}></bldg:boundedBy>"
    )


def window(gml_id: str, ring: Sequence[Vec3]) -> str:
    return (
        f'<bldg:opening><bldg:Window gml:id="{gml_id}">'
        f"{multi_surface('lod3MultiSurface', ring)}</bldg:Window></bldg:opening>"
    )


def box_building(gml_id: str, x: float, y: float, w: float, d: float, h: float, windows: int = 0) -> str:
    """Flat-roofed box; windows are 2x2 squares in front of the south wall."""
    x1, y1 = x + w, y + d
    panes = "".join(
        window(
            f"{gml_id}-win-{k + 1}",
            [(x + 2 + 4 * k, y - 0.05, 2), (x + 4 + 4 * k, y - 0.05, 2),
             (x + 4 + 4 * k, y - 0.05, 4), (x + 2 + 4 * k, y - 0.05, 4)],
        )
        for k in range(windows)
    )
    return (
        f'<core:cityObjectMember><bldg:Building gml:id="{gml_id}">'
        f"<gml:name>{gml_id}</gml:name><bldg:measuredHeight>{h:g}</bldg:measuredHeight>"
        + surface("GroundSurface", f"{gml_id}-ground", [(x, y, 0), (x, y1, 0), (x1, y1, 0), (x1, y, 0)])
        + surface("RoofSurface", f"{gml_id}-roof", [(x, y, h), (x1, y, h), (x1, y1, h), (x, y1, h)])
        + surface("WallSurface", f"{gml_id}-south", [(x, y, 0), (x1, y, 0), (x1, y, h), (x, y, h)], panes)
        + surface("WallSurface", f"{gml_id}-east", [(x1, y, 0), (x1, y1, 0), (x1, y1, h), (x1, y, h)])
        + surface("WallSurface", f"{gml_id}-north", [(x1, y1, 0), (x, y1, 0), (x, y1, h), (x1, y1, h)])
        + surface("WallSurface", f"{gml_id}-west", [(x, y1, 0), (x, y, 0), (x, y, h), (x, y1, h)])
        + "</bldg:Building></core:cityObjectMember>\n"
    )


def city_xml(buildings: List[str]) -> str:
    return HEADER + "".join(buildings) + FOOTER


BOX_CITY = city_xml([
    box_building("box", 0, 0, 10, 10, 10, windows=2),
    box_building("tower", 20, 0, 6, 6, 20, windows=1),
])

PEDESTRIANS = "value,x,y,z\n42,-13,25,0\n17,4,-6,0\n"
DICTIONARY = "ref,gml_id\nb1,box\nb2,tower\nw1,box-win-1\nw2,tower-win-1\n"


def frozen_store(model, **datasets) -> Store:
    """Store with the city model under "model" and each dataset under its keyword."""
    store = Store()
    store.add_graph("model", model.graph)
    for name, graph in datasets.items():
        store.add_graph(name, graph)
    return store.freeze()


@pytest.fixture
def box_city_xml() -> str:
    return BOX_CITY


@pytest.fixture
def box_model():
    return parse_citygml(BOX_CITY)


@pytest.fixture
def box_model_text(box_model) -> str:
    return serialize_graph(box_model.graph)


@pytest.fixture
def box_index(box_model):
    return extract_geometry_index(box_model)


@pytest.fixture
def write_file(tmp_path):
    """Write text under tmp_path and return the path."""
    def write(name: str, text: str):
        path = tmp_path / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        return path
    return write
