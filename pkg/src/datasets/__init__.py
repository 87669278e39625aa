"""Dataset ingest: tables, the reference dictionary, grids and the data schemas."""

from .tables import Table, parse_table, read_table, value_literal
from .dictionary import Dictionary, load_dictionary
from .grid import FieldGrid, read_grid_field, write_grid_field
from .ingest import (
    DATA_KINDS,
    grid_to_graph,
    ingest_grid_field,
    ingest_object_data,
    ingest_point_data,
    ingest_region_data,
    ingest_relation_data,
    load_regions,
)
from .schema import data_elements, derive_kind, element_kind

__all__ = [
    "Table",
    "parse_table",
    "read_table",
    "value_literal",
    "Dictionary",
    "load_dictionary",
    "FieldGrid",
    "read_grid_field",
    "write_grid_field",
    "DATA_KINDS",
    "grid_to_graph",
    "ingest_grid_field",
    "ingest_object_data",
    "ingest_point_data",
    "ingest_region_data",
    "ingest_relation_data",
    "load_regions",
    "data_elements",
    "derive_kind",
    "element_kind",
]
