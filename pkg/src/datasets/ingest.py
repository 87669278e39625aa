"""
Dataset ingestion into RDF following the three data schemas:

- spatial:   ``x a T. x :value v. x :location loc. loc a :Point|:Region ...``
- object:    ``x a T. x :value v. x :about y.``
- relation:  ``x a T. x :value v. x :arg1 y1. x :arg2 y2.``
"""

from typing import Dict, Optional, Tuple

import numpy as np

from src.datasets.dictionary import Dictionary
from src.datasets.grid import FieldGrid, read_grid_field
from src.datasets.tables import Table, value_literal
from src.citymodel.geometry_index import Ring, parse_poslist
from src.errors import DatasetError, InputError
from src.logging import logger
from src.rdf.graph import Graph
from src.rdf.terms import (
    ABOUT,
    ARG1,
    ARG2,
    IRI,
    LOCATION,
    Literal,
    POINT,
    POSLIST_VIZ,
    RDF_TYPE,
    REGION,
    Triple,
    VALUE,
    VX,
    VY,
    VZ,
    XCOORD,
    YCOORD,
    ZCOORD,
    viz,
)

DATA_KINDS = ("point", "region", "object", "relation", "grid")


def _require(table: Table, columns) -> None:
    if not table.rows:
        return
    missing = [c for c in columns if c not in table.columns]
    if missing:
        raise DatasetError(f"{table.name}: missing column(s) {', '.join(missing)}")


def _point_node(graph: Graph, node: IRI, x: float, y: float, z: float) -> None:
    graph.add(Triple(node, RDF_TYPE, POINT))
    graph.add(Triple(node, XCOORD, Literal(x)))
    graph.add(Triple(node, YCOORD, Literal(y)))
    graph.add(Triple(node, ZCOORD, Literal(z)))


def _coordinate(value: float):
    return int(value) if float(value).is_integer() and abs(value) < 1e15 else float(value)


def ingest_point_data(
    table: Table,
    type_iri: IRI,
    id_prefix: str = "data",
    loc_prefix: str = "loc",
) -> Graph:
    """
    Point-located data: columns ``value,x,y,z``.

    Each row i becomes ``:{id_prefix}{i}`` with a ``:{loc_prefix}{i}`` Point.

    Raises:
        DatasetError: On missing columns or non-numeric cells
    """
    _require(table, ("value", "x", "y", "z"))
    graph = Graph()
    for row in range(len(table)):
        node = viz(f"{id_prefix}{row + 1}")
        loc = viz(f"{loc_prefix}{row + 1}")
        value = _coordinate(table.number(row, "value"))
        coords = [_coordinate(table.number(row, c)) for c in ("x", "y", "z")]
        graph.add(Triple(node, RDF_TYPE, type_iri))
        graph.add(Triple(node, VALUE, Literal(value)))
        graph.add(Triple(node, LOCATION, loc))
        _point_node(graph, loc, *coords)
    logger.info(f"📊 Ingested {len(table)} point data element(s) as {type_iri.local_name}")
    return graph


def load_regions(table: Table) -> Dict[str, Ring]:
    """
    Region side file: columns ``ref,poslist``.

    Raises:
        DatasetError: On duplicate refs or invalid rings
    """
    _require(table, ("ref", "poslist"))
    regions: Dict[str, Ring] = {}
    for row in range(len(table)):
        ref = table.cell(row, "ref")
        if ref in regions:
            raise DatasetError(f"{table.name}: duplicate region '{ref}' (row {row + 1})")
        try:
            regions[ref] = parse_poslist(table.cell(row, "poslist"), f" of region '{ref}'")
        except InputError as e:
            raise DatasetError(f"{table.name}: row {row + 1}: {e}") from None
    return regions


def ingest_region_data(
    table: Table,
    type_iri: IRI,
    regions: Dict[str, Ring],
    id_prefix: str = "data",
    loc_prefix: str = "region",
) -> Graph:
    """
    Region-located data: columns ``value,region_ref``; the location is a
    ``:Region`` node carrying the ring as a ``:posList`` literal.

    Raises:
        DatasetError: On an unknown region reference
    """
    _require(table, ("value", "region_ref"))
    graph = Graph()
    for row in range(len(table)):
        ref = table.cell(row, "region_ref")
        if ref not in regions:
            raise DatasetError(f"{table.name}: unknown region '{ref}' (row {row + 1})")
        ring = regions[ref]
        node = viz(f"{id_prefix}{row + 1}")
        loc = viz(f"{loc_prefix}{row + 1}")
        text = " ".join(repr(float(c)) for point in ring + (ring[0],) for c in point)
        graph.add(Triple(node, RDF_TYPE, type_iri))
        graph.add(Triple(node, VALUE, value_literal(table.cell(row, "value"))))
        graph.add(Triple(node, LOCATION, loc))
        graph.add(Triple(loc, RDF_TYPE, REGION))
        graph.add(Triple(loc, POSLIST_VIZ, Literal(text)))
    logger.info(f"📊 Ingested {len(table)} region data element(s) as {type_iri.local_name}")
    return graph


def ingest_object_data(
    table: Table,
    type_iri: IRI,
    dictionary: Dictionary,
    id_prefix: str = "data",
    model: Optional[Graph] = None,
) -> Graph:
    """
    Object-related data: columns ``value,object_ref``.

    Raises:
        DictionaryError: Naming the unresolvable reference and row
    """
    _require(table, ("value", "object_ref"))
    graph = Graph()
    for row in range(len(table)):
        target = dictionary.resolve(table.cell(row, "object_ref"), row + 1, model)
        node = viz(f"{id_prefix}{row + 1}")
        graph.add(Triple(node, RDF_TYPE, type_iri))
        graph.add(Triple(node, VALUE, value_literal(table.cell(row, "value"))))
        graph.add(Triple(node, ABOUT, target))
    logger.info(f"📊 Ingested {len(table)} object data element(s) as {type_iri.local_name}")
    return graph


def ingest_relation_data(
    table: Table,
    type_iri: IRI,
    dictionary: Dictionary,
    id_prefix: str = "data",
    model: Optional[Graph] = None,
) -> Graph:
    """
    Relation data: columns ``value,arg1_ref,arg2_ref``; the two objects
    must be distinct.

    Raises:
        DictionaryError: On unresolvable references
        DatasetError: If both arguments resolve to the same object
    """
    _require(table, ("value", "arg1_ref", "arg2_ref"))
    graph = Graph()
    for row in range(len(table)):
        arg1 = dictionary.resolve(table.cell(row, "arg1_ref"), row + 1, model)
        arg2 = dictionary.resolve(table.cell(row, "arg2_ref"), row + 1, model)
        if arg1 == arg2:
            raise DatasetError(
                f"{table.name}: row {row + 1}: relation of {arg1.local_name} to itself"
            )
        node = viz(f"{id_prefix}{row + 1}")
        graph.add(Triple(node, RDF_TYPE, type_iri))
        graph.add(Triple(node, VALUE, value_literal(table.cell(row, "value"))))
        graph.add(Triple(node, ARG1, arg1))
        graph.add(Triple(node, ARG2, arg2))
    logger.info(f"📊 Ingested {len(table)} relation data element(s) as {type_iri.local_name}")
    return graph


def grid_to_graph(
    grid: FieldGrid,
    type_iri: IRI,
    id_prefix: str = "sample",
    loc_prefix: str = "sloc",
) -> Graph:
    """
    One spatial data element per grid node, in file order.

    Vector samples carry ``:vx :vy :vz`` plus their magnitude as ``:value``.
    """
    graph = Graph()
    for n, (i, j, k) in enumerate(grid.indices(), 1):
        node = viz(f"{id_prefix}{n}")
        loc = viz(f"{loc_prefix}{n}")
        x, y, z = (_coordinate(c) for c in grid.node_position(i, j, k))
        graph.add(Triple(node, RDF_TYPE, type_iri))
        value = grid.value_at_index(i, j, k)
        if grid.is_vector:
            graph.add(Triple(node, VALUE, Literal(float(np.linalg.norm(value)))))
            graph.add(Triple(node, VX, Literal(float(value[0]))))
            graph.add(Triple(node, VY, Literal(float(value[1]))))
            graph.add(Triple(node, VZ, Literal(float(value[2]))))
        else:
            graph.add(Triple(node, VALUE, Literal(value)))
        graph.add(Triple(node, LOCATION, loc))
        _point_node(graph, loc, x, y, z)
    return graph


def ingest_grid_field(
    text: str,
    type_iri: IRI,
    id_prefix: str = "sample",
    loc_prefix: str = "sloc",
) -> Tuple[Graph, FieldGrid]:
    """
    Parse a grid field file into sample-point RDF plus the dense grid.

    Raises:
        GridFieldError: On a malformed file
    """
    grid = read_grid_field(text)
    graph = grid_to_graph(grid, type_iri, id_prefix, loc_prefix)
    kind = "vector" if grid.is_vector else "scalar"
    logger.info(f"📊 Ingested {kind} grid {grid.dims} as {grid.node_count} sample(s)")
    return graph, grid
