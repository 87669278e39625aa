"""City model ingest: CityGML conversion and the geometry index."""

from .citygml import CityModelGraph, parse_citygml, read_citygml, element_iri
from .geometry_index import (
    CityObjectEntry,
    GeometryIndex,
    Surface,
    extract_geometry_index,
    parse_poslist,
)

__all__ = [
    "CityModelGraph",
    "parse_citygml",
    "read_citygml",
    "element_iri",
    "CityObjectEntry",
    "GeometryIndex",
    "Surface",
    "extract_geometry_index",
    "parse_poslist",
]
