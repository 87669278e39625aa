"""Technique files, dataset classification and the abstract-level mapper."""

import pytest

from src.datasets import ingest_grid_field, ingest_object_data, ingest_point_data, load_dictionary, parse_table
from src.errors import (
    AbstractValidationError,
    ClassificationError,
    ConfigError,
    InvariantViolation,
    MissingParameterError,
    QuerySyntaxError,
    TechniqueError,
    VocabularyError,
)
from src.rdf import BNode, Graph, Literal, RDF_TYPE, Store, Triple, cgml, viz
from src.rdf.terms import COLOR, DERIVED_FROM, ENDPOINT, HEIGHT, LEVELS, LOCATION, RADIUS, RED, XCOORD
from src.techniques import (
    CONE,
    ISOSURFACE,
    LINE,
    PANEL,
    SPHERE,
    DataCase,
    EmitHints,
    LayoutParams,
    VocabularyEntry,
    apply_technique,
    classify_dataset,
    get_vocabulary,
    library_names,
    library_path,
    parse_technique,
    read_technique,
    reset_vocabulary,
    validate_abstract,
    visual_nodes,
    vocabulary_subgraph,
)

from tests.conftest import DICTIONARY, PEDESTRIANS, frozen_store


def technique(body: str, case: str = "spatial-individual", extra: str = "") -> str:
    return f'technique "t"\ncase {case}\n{body}\n{extra}\n'


def peds_graph():
    return ingest_point_data(parse_table(PEDESTRIANS), viz("PedestrianCounting"), "pednum", "loc")


# ============================================================================
# Technique files
# ============================================================================


def test_library_techniques_parse():
    names = library_names()
    assert names == [
        "cone-at-point",
        "global-isosurface",
        "line-between-objects",
        "panel-near-object",
        "sphere-at-point",
        "wind-flowlines",
    ]
    cases = {name: read_technique(library_path(name)).case for name in names}
    assert cases["cone-at-point"] == DataCase.SPATIAL_INDIVIDUAL
    assert cases["global-isosurface"] == DataCase.SPATIAL_GLOBAL
    assert cases["line-between-objects"] == DataCase.OBJECT_RELATION
    assert cases["panel-near-object"] == DataCase.OBJECT_RELATED


def test_cone_technique_parameters():
    spec = read_technique(library_path("cone-at-point"))
    assert spec.name == "cone-at-point"
    assert spec.layout.cone_base_radius == 1
    assert spec.emit.color == (0, 0, 1)
    assert spec.query.constructed_types()[0] == CONE
    assert not spec.constructs_complex()


def test_layout_lists_parse_from_text():
    spec = read_technique(library_path("wind-flowlines"))
    assert spec.layout.seeds == [(0, 2, 1), (0, 5, 1), (0, 8, 1)]
    iso = read_technique(library_path("global-isosurface"))
    assert iso.layout.iso_levels == [1, 2]
    assert iso.layout.resample_dims == (9, 9, 5)
    assert iso.emit.transparency == pytest.approx(0.4)


def test_sections_are_optional_and_defaults_apply():
    spec = parse_technique(technique(
        "construct { _:s a :Sphere ; :radius ?v ; :location ?l } where { ?x :value ?v ; :location ?l }"
    ))
    assert spec.layout == LayoutParams()
    assert spec.emit.title == "city-viz-forge"


QUERY = "construct { _:s a :Sphere ; :radius ?v ; :location ?l } where { ?x :value ?v ; :location ?l }"


@pytest.mark.parametrize("text, error, fragment", [
    ("case spatial-individual\n" + QUERY, TechniqueError, "no name line"),
    ('technique "t"\n' + QUERY, TechniqueError, "missing 'case"),
    (technique(QUERY, case="sideways"), TechniqueError, "unknown case 'sideways'"),
    (technique(QUERY, extra="layout { sphere-size = 3 }"), TechniqueError, "unknown key 'sphere-size'"),
    (technique(QUERY, extra="layout { cone-base-radius = -1 }"), TechniqueError, "cone-base-radius"),
    (technique(QUERY, extra="emit { color = 2 0 0 }"), TechniqueError, "[0, 1]"),
    (technique(QUERY, extra="layout { a = 1 }\nlayout { b = 2 }"), TechniqueError, "duplicate layout block"),
    (technique(QUERY, extra="stray words"), TechniqueError, "unexpected text"),
    ('technique "t"\ncase spatial-individual\n', TechniqueError, "no construct query"),
    (technique("construct { _:s a :Blob ; :radius ?v } where { ?x :value ?v }"), VocabularyError, "Blob"),
    (technique("construct { :v a :IsoSurface ; :inputData ?x } where { ?x :value ?v }", case="spatial-global"),
     MissingParameterError, "iso-levels"),
    (technique("construct { :v a :IsoSurface ; :inputData ?x } where { ?x :value ?v }",
               extra="layout { iso-levels = 1 }"),
     TechniqueError, "requires case spatial-global"),
    (technique(QUERY, case="spatial-global"), TechniqueError, "needs a complex visual type"),
])
def test_technique_errors(text, error, fragment):
    with pytest.raises(error) as info:
        parse_technique(text)
    assert fragment in str(info.value)


def test_query_errors_carry_file_lines():
    text = 'technique "t"\ncase spatial-individual\n\nconstruct { _:s a :Sphere }\nwhere { ?x nope:q ?y }\n'
    with pytest.raises(QuerySyntaxError) as info:
        parse_technique(text)
    assert info.value.line == 5
    assert str(info.value).startswith("t: unknown prefix")


def test_missing_technique_file(tmp_path):
    with pytest.raises(TechniqueError, match="cannot read technique"):
        read_technique(tmp_path / "absent.tech")


def test_parameter_overrides_are_validated():
    params = LayoutParams().with_overrides({"cone-base-radius": "2.5"})
    assert params.cone_base_radius == 2.5
    with pytest.raises(ConfigError, match="unknown key 'bogus'"):
        LayoutParams().with_overrides({"bogus": "1"}, ConfigError)
    hints = EmitHints.from_entries({"color": "1 0.5 0"})
    assert hints.color == (1.0, 0.5, 0.0)


def test_resample_dims_need_two_nodes_per_axis():
    with pytest.raises(TechniqueError, match="at least 2"):
        LayoutParams.from_entries({"resample-dims": "1 4 4"})


# ============================================================================
# Classification
# ============================================================================


def test_classification_of_the_four_cases(box_model):
    peds = peds_graph()
    assert classify_dataset(peds) == DataCase.SPATIAL_INDIVIDUAL
    assert classify_dataset(peds, complex_technique=True) == DataCase.SPATIAL_GLOBAL
    notes = ingest_object_data(
        parse_table("value,object_ref\nhello,b1\n"), viz("RichText"), load_dictionary(parse_table(DICTIONARY))
    )
    assert classify_dataset(notes) == DataCase.OBJECT_RELATED
    with pytest.raises(ClassificationError):
        classify_dataset(Graph())


# ============================================================================
# Application
# ============================================================================


def test_cone_technique_on_pedestrian_counts(box_model):
    spec = read_technique(library_path("cone-at-point"))
    abstract = apply_technique(frozen_store(box_model, peds=peds_graph()), spec, datasets=["peds"])
    cones = abstract.visual_nodes()
    assert len(cones) == 2
    heights = sorted(abstract.graph.value(c, HEIGHT).value for c in cones)
    assert heights == [17, 42]
    first = next(c for c in cones if abstract.graph.value(c, HEIGHT) == Literal(42))
    location = abstract.graph.value(first, LOCATION)
    assert isinstance(location, BNode)
    assert abstract.graph.value(location, XCOORD) == Literal(-13)
    assert abstract.provenance[first] == [viz("pednum1")]
    assert Triple(first, DERIVED_FROM, viz("pednum1")) in abstract.graph
    assert abstract.technique == "cone-at-point"


def test_referenced_data_locations_are_copied(box_model):
    peds = ingest_point_data(parse_table(PEDESTRIANS), viz("PollutantConcentration"), "p", "ploc")
    spec = read_technique(library_path("sphere-at-point"))
    abstract = apply_technique(frozen_store(box_model, pollutants=peds), spec, datasets=["pollutants"])
    spheres = abstract.visual_nodes()
    assert sorted(abstract.graph.value(s, RADIUS).value for s in spheres) == [0.17, 0.42]
    locations = {abstract.graph.value(s, LOCATION) for s in spheres}
    assert locations == {viz("ploc1"), viz("ploc2")}
    assert abstract.graph.value(viz("ploc1"), XCOORD) == Literal(-13)
    assert validate_abstract(abstract.graph, box_model.graph) == []


def test_line_technique_links_windows(box_model):
    from src.datasets import ingest_relation_data

    relations = ingest_relation_data(
        parse_table("value,arg1_ref,arg2_ref\n0.9,w1,w2\n"), viz("IntervisibilityRelation"),
        load_dictionary(parse_table(DICTIONARY)),
    )
    spec = read_technique(library_path("line-between-objects"))
    abstract = apply_technique(frozen_store(box_model, rel=relations), spec, model=box_model.graph, datasets=["rel"])
    (line,) = abstract.visual_nodes()
    assert abstract.graph.types(line) == [LINE]
    assert sorted(e.value for e in abstract.graph.objects(line, ENDPOINT)) == sorted(
        [viz("box-win-1").value, viz("tower-win-1").value]
    )
    color = abstract.graph.value(line, COLOR)
    assert abstract.graph.value(color, RED) == Literal(0.9)


def test_panel_technique_near_building(box_model):
    notes = ingest_object_data(
        parse_table("value,object_ref\nBuilt in 1910,b1\n"), viz("RichText"),
        load_dictionary(parse_table(DICTIONARY)),
    )
    spec = read_technique(library_path("panel-near-object"))
    abstract = apply_technique(frozen_store(box_model, notes=notes), spec, model=box_model.graph, datasets=["notes"])
    (panel,) = abstract.visual_nodes()
    assert abstract.graph.types(panel) == [PANEL]
    relation = abstract.graph.value(panel, LOCATION)
    assert abstract.graph.value(relation, viz("arg1")) == viz("box")


def test_isosurface_levels_are_injected(box_model):
    text = "origin= 0 0 0\nspacing= 5 5 5\ndims= 2 2 2\n" + " ".join(str(v) for v in range(8)) + "\n"
    graph, _ = ingest_grid_field(text, viz("PollutantConcentration"))
    spec = read_technique(library_path("global-isosurface"))
    abstract = apply_technique(frozen_store(box_model, pollution=graph), spec, datasets=["pollution"])
    (iso,) = abstract.visual_nodes()
    assert abstract.graph.types(iso) == [ISOSURFACE]
    assert sorted(level.value for level in abstract.graph.objects(iso, LEVELS)) == [1, 2]
    assert len(abstract.graph.objects(iso, viz("inputData"))) == 8


def test_case_mismatch_is_a_classification_error(box_model):
    spec = read_technique(library_path("panel-near-object"))
    with pytest.raises(ClassificationError, match="expects object-related"):
        apply_technique(frozen_store(box_model, peds=peds_graph()), spec, datasets=["peds"])


def test_store_must_be_frozen(box_model):
    store = Store()
    store.add_graph("model", box_model.graph)
    with pytest.raises(InvariantViolation):
        apply_technique(store, read_technique(library_path("cone-at-point")))


def test_zero_count_row_is_dropped_with_a_warning(box_model):
    peds = ingest_point_data(parse_table("value,x,y,z\n42,-13,25,0\n0,4,-6,0\n"), viz("PedestrianCounting"), "pednum")
    spec = read_technique(library_path("cone-at-point"))
    abstract = apply_technique(frozen_store(box_model, peds=peds), spec, datasets=["peds"])
    (cone,) = abstract.visual_nodes()
    assert abstract.graph.value(cone, HEIGHT) == Literal(42)
    assert {tuple(sources) for sources in abstract.provenance.values()} == {(viz("pednum1"),)}
    assert not abstract.graph.triples(None, DERIVED_FROM, viz("pednum2"))
    assert len(abstract.graph.triples(None, XCOORD, None)) == 1
    (warning,) = abstract.warnings
    assert warning.template is None
    assert ":height must be positive, got 0" in warning.message
    assert validate_abstract(abstract.graph, box_model.graph) == []


def test_color_channel_out_of_range_drops_the_relation(box_model):
    from src.datasets import ingest_relation_data

    relations = ingest_relation_data(
        parse_table("value,arg1_ref,arg2_ref\n0.9,w1,w2\n1.5,w2,w1\n"), viz("IntervisibilityRelation"),
        load_dictionary(parse_table(DICTIONARY)),
    )
    spec = read_technique(library_path("line-between-objects"))
    abstract = apply_technique(frozen_store(box_model, rel=relations), spec, model=box_model.graph, datasets=["rel"])
    (line,) = abstract.visual_nodes()
    assert abstract.graph.value(abstract.graph.value(line, COLOR), RED) == Literal(0.9)
    (warning,) = abstract.warnings
    assert "outside [0, 1]" in warning.message


def test_every_row_out_of_range_gives_an_empty_visualization(box_model):
    zero = ingest_point_data(parse_table("value,x,y,z\n0,1,1,0\n"), viz("PollutantConcentration"))
    spec = read_technique(library_path("sphere-at-point"))
    abstract = apply_technique(frozen_store(box_model, data=zero), spec, datasets=["data"])
    assert abstract.visual_nodes() == []
    assert len(abstract.warnings) == 1


def test_structurally_invalid_abstract_graph_is_rejected(box_model):
    spec = parse_technique(technique(
        "construct { _:s a :Sphere ; :radius ?v ; :location ?x } where { ?x a :PedestrianCounting ; :value ?v }"
    ))
    with pytest.raises(AbstractValidationError) as info:
        apply_technique(frozen_store(box_model, peds=peds_graph()), spec, datasets=["peds"])
    assert "is not a point, region, relation or city object" in str(info.value)
    assert info.value.exit_code == 3


def test_no_matches_gives_an_empty_abstract_graph(box_model):
    spec = read_technique(library_path("cone-at-point"))
    abstract = apply_technique(frozen_store(box_model, peds=Graph()), spec, datasets=["peds"])
    assert abstract.visual_nodes() == []


# ============================================================================
# Validation and the vocabulary
# ============================================================================


def test_validation_reports_each_problem(box_model):
    cone, sphere = BNode("c"), BNode("s")
    graph = Graph([
        Triple(cone, RDF_TYPE, CONE),
        Triple(cone, LOCATION, viz("nowhere")),
        Triple(sphere, RDF_TYPE, SPHERE),
        Triple(sphere, RADIUS, Literal("big")),
        Triple(sphere, LOCATION, viz("box")),
    ])
    messages = [v.message for v in validate_abstract(graph, box_model.graph)]
    assert "Cone is missing required property :height" in messages
    assert any("not a point, region, relation or city object" in m for m in messages)
    assert any("dangling reference :nowhere" in m for m in messages)
    assert any(":radius must be numeric" in m for m in messages)


def test_vocabulary_subgraph_drops_provenance(box_model):
    spec = read_technique(library_path("cone-at-point"))
    abstract = apply_technique(frozen_store(box_model, peds=peds_graph()), spec, datasets=["peds"])
    core = vocabulary_subgraph(abstract.graph)
    assert not core.triples(None, DERIVED_FROM, None)
    assert len(core) == 14
    assert len(abstract.graph) == 18
    assert visual_nodes(core) == abstract.visual_nodes()


def test_custom_visual_types_can_be_registered():
    try:
        get_vocabulary().register(VocabularyEntry(viz("Billboard"), (viz("content"),), "point"))
        spec = parse_technique(technique(
            "construct { _:b a :Billboard ; :content ?v ; :location ?l } where { ?x :value ?v ; :location ?l }"
        ))
        assert spec.query.constructed_types() == [viz("Billboard")]
    finally:
        reset_vocabulary()
    with pytest.raises(VocabularyError):
        get_vocabulary().register(VocabularyEntry(viz("Bad"), (), "point"))
    reset_vocabulary()


def test_building_type_is_a_city_object(box_model):
    assert cgml("Building") in box_model.graph.types(viz("box"))
