"""Tables, the reference dictionary and the data schemas."""

import pytest

from src.datasets import (
    derive_kind,
    ingest_object_data,
    ingest_point_data,
    ingest_region_data,
    ingest_relation_data,
    load_dictionary,
    load_regions,
    parse_table,
    read_table,
    value_literal,
)
from src.errors import ClassificationError, DatasetError, DictionaryError
from src.rdf import Graph, Literal, RDF_TYPE, Triple, viz
from src.rdf.terms import ABOUT, ARG1, ARG2, LOCATION, POINT, POSLIST_VIZ, REGION, VALUE, XCOORD, ZCOORD

PEDESTRIANS = "value,x,y,z\n42,-13,25,0\n17,4,-6,0\n"


def dictionary():
    return load_dictionary(parse_table(
        "ref,gml_id\nb1,box\nb2,tower\nw1,box-win-1\nw2,tower-win-1\n"
    ))


# ============================================================================
# Tables
# ============================================================================


def test_parse_table_strips_cells_and_skips_blank_rows():
    table = parse_table(" value , x \n 1 , 2 \n\n3,4\n", required=("value",))
    assert table.columns == ["value", "x"]
    assert table.rows == [{"value": "1", "x": "2"}, {"value": "3", "x": "4"}]


@pytest.mark.parametrize("text, fragment", [
    ("", "missing header"),
    ("value,x\n1\n", "row 1 has 1 cells"),
    ("x,y\n1,2\n", "missing column(s) value"),
])
def test_table_shape_errors(text, fragment):
    with pytest.raises(DatasetError) as info:
        parse_table(text, required=("value",))
    assert fragment in str(info.value)


def test_number_names_row_and_column():
    table = parse_table("value,x,y,z\n1,2,oops,4\n", name="peds.csv")
    with pytest.raises(DatasetError, match=r"peds.csv: row 1, column 'y'"):
        table.number(0, "y")


def test_value_literal_keeps_level_of_measurement():
    assert value_literal("42") == Literal(42)
    assert isinstance(value_literal("42").value, int)
    assert value_literal("5.67") == Literal(5.67)
    assert value_literal("high") == Literal("high")


def test_read_table_missing_file(tmp_path):
    with pytest.raises(DatasetError, match="cannot read"):
        read_table(tmp_path / "absent.csv")


# ============================================================================
# Point data
# ============================================================================


def test_point_rows_follow_the_spatial_schema():
    graph = ingest_point_data(parse_table(PEDESTRIANS), viz("PedestrianCounting"), "pednum", "loc")
    assert len(graph) == 2 * 7
    assert graph.value(viz("pednum1"), VALUE) == Literal(42)
    assert graph.value(viz("pednum1"), LOCATION) == viz("loc1")
    assert graph.types(viz("loc1")) == [POINT]
    assert graph.value(viz("loc1"), XCOORD) == Literal(-13)
    assert isinstance(graph.value(viz("loc2"), ZCOORD).value, int)
    assert derive_kind(graph) == "point"


def test_point_data_rejects_non_numeric_cells():
    with pytest.raises(DatasetError, match="row 2"):
        ingest_point_data(parse_table("value,x,y,z\n1,0,0,0\nmany,0,0,0\n"), viz("T"))


def test_empty_dataset_is_an_empty_graph():
    graph = ingest_point_data(parse_table("value,x,y,z\n"), viz("T"))
    assert len(graph) == 0
    assert derive_kind(graph) is None


# ============================================================================
# Region data
# ============================================================================


def test_region_rows_carry_the_ring_as_poslist():
    regions = load_regions(parse_table("ref,poslist\nsq,0 0 0 6 0 0 6 6 0 0 6 0\n"))
    graph = ingest_region_data(parse_table("value,region_ref\n55,sq\n"), viz("Noise"), regions, "noise", "area")
    assert graph.types(viz("area1")) == [REGION]
    text = graph.value(viz("area1"), POSLIST_VIZ).value
    assert text.split()[:3] == ["0.0", "0.0", "0.0"]
    assert len(text.split()) == 15
    assert derive_kind(graph) == "region"


def test_unknown_region_is_rejected():
    with pytest.raises(DatasetError, match="unknown region 'nope'"):
        ingest_region_data(parse_table("value,region_ref\n1,nope\n"), viz("T"), {})


def test_bad_region_ring_names_the_row():
    with pytest.raises(DatasetError, match="row 1"):
        load_regions(parse_table("ref,poslist\nsq,0 0 0 1 1 1\n"))


# ============================================================================
# Object and relation data
# ============================================================================


def test_dictionary_resolves_against_the_model(box_model):
    entries = dictionary()
    assert entries.resolve("b1", model=box_model.graph) == viz("box")
    with pytest.raises(DictionaryError) as info:
        entries.resolve("b9", row=4)
    assert info.value.ref == "b9"
    assert info.value.row == 4


def test_dictionary_entry_missing_from_model(box_model):
    entries = load_dictionary(parse_table("ref,gml_id\nghost,no-such-building\n"))
    with pytest.raises(DictionaryError, match="not in the city model"):
        entries.resolve("ghost", model=box_model.graph)


def test_duplicate_dictionary_reference():
    with pytest.raises(DictionaryError, match="duplicate reference 'b1'"):
        load_dictionary(parse_table("ref,gml_id\nb1,a\nb1,b\n"))


def test_object_rows_point_at_city_objects(box_model):
    graph = ingest_object_data(
        parse_table("value,object_ref\nBuilt in 1910,b1\n"), viz("RichText"), dictionary(), "note",
        model=box_model.graph,
    )
    assert graph.value(viz("note1"), ABOUT) == viz("box")
    assert graph.value(viz("note1"), VALUE) == Literal("Built in 1910")
    assert derive_kind(graph) == "object"


def test_object_rows_with_unresolvable_reference():
    with pytest.raises(DictionaryError, match=r"'b7' \(row 2\)"):
        ingest_object_data(parse_table("value,object_ref\na,b1\nb,b7\n"), viz("RichText"), dictionary())


def test_relation_rows(box_model):
    graph = ingest_relation_data(
        parse_table("value,arg1_ref,arg2_ref\n0.9,w1,w2\n"), viz("IntervisibilityRelation"), dictionary(),
        "rel", model=box_model.graph,
    )
    assert graph.value(viz("rel1"), ARG1) == viz("box-win-1")
    assert graph.value(viz("rel1"), ARG2) == viz("tower-win-1")
    assert derive_kind(graph) == "relation"


def test_relation_of_an_object_to_itself():
    with pytest.raises(DatasetError, match="to itself"):
        ingest_relation_data(parse_table("value,arg1_ref,arg2_ref\n1,b1,b1\n"), viz("T"), dictionary())


# ============================================================================
# Schema discrimination
# ============================================================================


def test_mixed_schemas_are_rejected():
    graph = Graph([
        Triple(viz("a"), VALUE, Literal(1)),
        Triple(viz("a"), ABOUT, viz("box")),
        Triple(viz("b"), VALUE, Literal(2)),
        Triple(viz("b"), ARG1, viz("box")),
        Triple(viz("b"), ARG2, viz("tower")),
    ])
    with pytest.raises(ClassificationError, match="mixes schemas"):
        derive_kind(graph)


def test_element_with_both_location_and_about():
    graph = Graph([
        Triple(viz("a"), RDF_TYPE, viz("T")),
        Triple(viz("a"), LOCATION, viz("l")),
        Triple(viz("a"), ABOUT, viz("box")),
    ])
    with pytest.raises(ClassificationError):
        derive_kind(graph)
