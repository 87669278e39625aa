"""Layout manager, concrete solvers and the scene interchange format."""

import json

import numpy as np
import pytest

from src.datasets import (
    ingest_grid_field,
    ingest_object_data,
    ingest_point_data,
    ingest_relation_data,
    load_dictionary,
    parse_table,
)
from src.errors import InvariantViolation, LayoutError, SceneFormatError, UnsupportedRelationError
from src.layout import (
    ConcreteScene,
    SolverRegistry,
    SphereShape,
    dump_scene,
    get_solver_registry,
    layout_scene,
    load_scene,
    read_scene,
    write_scene,
)
from src.layout.geometry import rotation_facing
from src.rdf import BNode, Graph, Literal, RDF_TYPE, Triple, viz
from src.rdf.serialization import render_term
from src.rdf.terms import ARG1, ARG2, CONTENT, LOCATION, RADIUS
from src.techniques import (
    ABOVE,
    CONE,
    FRONT_OF,
    PANEL,
    SPHERE,
    AbstractVisualGraph,
    LayoutParams,
    apply_technique,
    library_path,
    read_technique,
)

from tests.conftest import DICTIONARY, PEDESTRIANS, frozen_store


def run(model, index, technique, **datasets):
    spec = read_technique(library_path(technique))
    abstract = apply_technique(
        frozen_store(model, **datasets), spec, model=model.graph, datasets=list(datasets),
    )
    return layout_scene(abstract, index, spec.layout, spec.emit)


def placed_at(relation, target, visual_type, **properties) -> AbstractVisualGraph:
    """One visual node located by a spatial relation to a city object."""
    node, loc = viz("mark"), BNode("rel")
    graph = Graph()
    graph.add(Triple(node, RDF_TYPE, visual_type))
    for predicate, term in properties.values():
        graph.add(Triple(node, predicate, term))
    graph.add(Triple(node, LOCATION, loc))
    graph.add(Triple(loc, RDF_TYPE, relation))
    graph.add(Triple(loc, ARG1, viz(target)))
    graph.add(Triple(loc, ARG2, node))
    return AbstractVisualGraph.from_graph(graph, "hand-built")


def peds():
    return ingest_point_data(parse_table(PEDESTRIANS), viz("PedestrianCounting"), "pednum", "loc")


# ============================================================================
# Individual visual types
# ============================================================================


def test_cones_stand_on_their_points(box_model, box_index):
    scene = run(box_model, box_index, "cone-at-point", peds=peds())
    assert scene.source == "cone-at-point"
    assert [n.id for n in scene.nodes] == ["n0", "n1"]
    by_height = {n.shape.height: n for n in scene.nodes}
    assert set(by_height) == {17.0, 42.0}
    tall = by_height[42.0]
    assert tall.shape.kind == "cone"
    assert tall.shape.base_radius == 1.0
    assert tall.position == (-13.0, 25.0, 0.0)
    assert tall.material.color == (0.0, 0.0, 1.0)
    assert tall.provenance.type == render_term(CONE)
    assert tall.provenance.sources == [render_term(viz("pednum1"))]
    assert tall.provenance.location.kind == "point"
    assert tall.provenance.location.coords == (-13.0, 25.0, 0.0)


def test_spheres_are_centred_on_points(box_model, box_index):
    pollution = ingest_point_data(parse_table(PEDESTRIANS), viz("PollutantConcentration"), "p", "ploc")
    scene = run(box_model, box_index, "sphere-at-point", pollution=pollution)
    radii = sorted(n.shape.radius for n in scene.nodes)
    assert radii == [0.17, 0.42]
    big = next(n for n in scene.nodes if n.shape.radius == 0.42)
    assert big.position == (-13.0, 25.0, 0.0)
    assert big.material.color == (1.0, 0.5, 0.0)
    assert big.provenance.location.node == render_term(viz("ploc1"))


def test_lines_join_window_centroids(box_model, box_index):
    relations = ingest_relation_data(
        parse_table("value,arg1_ref,arg2_ref\n0.9,w1,w2\n"), viz("IntervisibilityRelation"),
        load_dictionary(parse_table(DICTIONARY)),
    )
    (line,) = run(box_model, box_index, "line-between-objects", rel=relations).nodes
    assert line.shape.p1 == pytest.approx((3.0, -0.05, 3.0))
    assert line.shape.p2 == pytest.approx((23.0, -0.05, 3.0))
    assert line.shape.width == 0.05
    assert line.material.color == (0.9, 0.0, 0.0)
    assert [e.kind for e in line.provenance.endpoints] == ["object", "object"]


def test_panels_face_the_building_they_describe(box_model, box_index):
    notes = ingest_object_data(
        parse_table("value,object_ref\nBuilt in 1910,b1\n"), viz("RichText"),
        load_dictionary(parse_table(DICTIONARY)),
    )
    (panel,) = run(box_model, box_index, "panel-near-object", notes=notes).nodes
    assert panel.shape.content == "Built in 1910"
    assert (panel.shape.width, panel.shape.height) == (4.0, 2.0)
    # centre of a 10 m wall, 2 m out
    assert panel.position[2] == pytest.approx(5.0)
    offset = np.array([5.0, 5.0]) - np.array(panel.position[:2])
    assert np.linalg.norm(offset) == pytest.approx(7.0)
    assert np.dot(rotation_facing(panel.orientation)[:2], offset) > 0
    assert panel.provenance.location.kind == "relation"
    assert panel.provenance.location.arg1 == render_term(viz("box"))


def test_sphere_above_a_building_rests_on_the_clearance(box_index):
    abstract = placed_at(ABOVE, "box", SPHERE, radius=(RADIUS, Literal(1)))
    (sphere,) = layout_scene(abstract, box_index).nodes
    assert sphere.position == pytest.approx((5.0, 5.0, 13.0))
    assert sphere.material.color == (0.0, 0.0, 1.0)


def test_clearance_comes_from_the_layout_parameters(box_index):
    abstract = placed_at(ABOVE, "tower", SPHERE, radius=(RADIUS, Literal(1)))
    params = LayoutParams().with_overrides({"above-clearance": "5"})
    (sphere,) = layout_scene(abstract, box_index, params).nodes
    assert sphere.position == pytest.approx((23.0, 3.0, 26.0))


# ============================================================================
# Global visual types
# ============================================================================


def test_isosurface_gives_one_mesh_per_level(box_model, box_index):
    text = "origin= 0 0 0\nspacing= 5 5 5\ndims= 2 2 2\n" + " ".join(str(v) for v in range(8)) + "\n"
    graph, _ = ingest_grid_field(text, viz("PollutantConcentration"))
    scene = run(box_model, box_index, "global-isosurface", pollution=graph)
    assert [n.shape.level for n in scene.nodes] == [1.0, 2.0]
    assert [(n.provenance.part, n.provenance.parts) for n in scene.nodes] == [(0, 2), (1, 2)]
    assert len(scene.nodes[0].provenance.samples) == 8
    assert scene.nodes[1].provenance.samples == []
    assert all(n.shape.triangles for n in scene.nodes)
    assert scene.nodes[0].material.transparency == 0.4
    assert scene.abstract_nodes() == [render_term(viz("vObj"))]


def test_flowlines_start_at_the_seeds(box_model, box_index):
    text = "origin= 0 0 0\nspacing= 5 5 1\ndims= 3 3 3\n" + " ".join(["1 0 0"] * 27) + "\n"
    wind, _ = ingest_grid_field(text, viz("WindVelocity"))
    scene = run(box_model, box_index, "wind-flowlines", wind=wind)
    assert len(scene) == 3
    assert [n.shape.points[0] for n in scene.nodes] == [(0.0, 2.0, 1.0), (0.0, 5.0, 1.0), (0.0, 8.0, 1.0)]
    for node in scene.nodes:
        last = node.shape.points[-1]
        assert 9.9 - 1e-9 < last[0] <= 10.0
        assert last[1:] == pytest.approx(node.shape.points[0][1:])
    assert scene.nodes[0].provenance.seeds == "0 2 1; 0 5 1; 0 8 1"


# ============================================================================
# Manager and registry
# ============================================================================


def test_thread_pool_gives_the_same_scene(box_model, box_index):
    spec = read_technique(library_path("cone-at-point"))
    abstract = apply_technique(frozen_store(box_model, peds=peds()), spec, datasets=["peds"])
    serial = layout_scene(abstract, box_index, spec.layout, spec.emit, workers=1)
    threaded = layout_scene(abstract, box_index, spec.layout, spec.emit, workers=4)
    assert dump_scene(serial) == dump_scene(threaded)


def test_builtin_solvers_are_registered():
    registry = get_solver_registry()
    assert set(registry.list_solvers()) == {"Sphere", "Cone", "Line", "Panel", "IsoSurface", "FlowLines"}
    assert set(registry.list_relations()) == {
        "nearRelation", "aboveRelation", "insideRelation", "frontOfRelation",
    }
    assert registry.is_registered(CONE)


def test_missing_solver_names_the_node(box_index):
    abstract = placed_at(ABOVE, "box", SPHERE, radius=(RADIUS, Literal(1)))
    with pytest.raises(LayoutError, match="no concrete solver for visual type Sphere") as info:
        layout_scene(abstract, box_index, registry=SolverRegistry())
    assert info.value.node == render_term(viz("mark"))


def test_front_of_is_declared_but_unsolved(box_index):
    abstract = placed_at(FRONT_OF, "box", PANEL, content=(CONTENT, Literal("note")))
    with pytest.raises(UnsupportedRelationError, match="frontOfRelation"):
        layout_scene(abstract, box_index)


def test_solver_failures_are_layout_errors(box_index):
    abstract = placed_at(ABOVE, "box-win-1", SPHERE, radius=(RADIUS, Literal(1)))
    with pytest.raises(LayoutError, match="no roof surfaces"):
        layout_scene(abstract, box_index)


def test_empty_solver_output_breaks_an_invariant(box_index):
    registry = SolverRegistry()
    registry.register_solver(SPHERE, lambda node, ctx: [])
    abstract = placed_at(ABOVE, "box", SPHERE, radius=(RADIUS, Literal(1)))
    with pytest.raises(InvariantViolation, match="produced no scene node"):
        layout_scene(abstract, box_index, registry=registry)


def test_invalid_shapes_from_a_solver_are_layout_errors(box_index):
    registry = SolverRegistry()
    registry.register_solver(SPHERE, lambda node, ctx: [SphereShape(radius=0)])
    abstract = placed_at(ABOVE, "box", SPHERE, radius=(RADIUS, Literal(1)))
    with pytest.raises(LayoutError, match="invalid Sphere shape: radius") as info:
        layout_scene(abstract, box_index, registry=registry)
    assert info.value.node == render_term(viz("mark"))
    assert info.value.exit_code == 2


def test_empty_abstract_graph_gives_an_empty_scene(box_index):
    scene = layout_scene(AbstractVisualGraph(Graph(), technique="none"), box_index)
    assert len(scene) == 0
    assert scene.source == "none"


# ============================================================================
# Scene interchange format
# ============================================================================


def test_scene_file_round_trip(box_model, box_index, tmp_path):
    scene = run(box_model, box_index, "cone-at-point", peds=peds())
    text = dump_scene(scene)
    header = json.loads(text.splitlines()[0])
    assert header == {"format": "city-viz-forge-scene", "source": "cone-at-point", "version": 1}
    assert len(text.splitlines()) == 3
    assert load_scene(text) == scene
    write_scene(scene, tmp_path / "scene.jsonl")
    assert read_scene(tmp_path / "scene.jsonl") == scene


def test_empty_scene_round_trip():
    scene = ConcreteScene(source="empty")
    assert load_scene(dump_scene(scene)) == scene


def _bad_node(text: str) -> str:
    header = '{"format": "city-viz-forge-scene", "source": "", "version": 1}\n'
    return header + text + "\n"


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("", "empty scene file"),
        ("not json\n", "header is not JSON"),
        ('{"format": "other", "version": 1}\n', "not a city-viz-forge-scene file"),
        ('{"format": "city-viz-forge-scene", "version": 2}\n', "unsupported scene version 2"),
        (
            _bad_node('{"shape": {"kind": "sphere", "radius": -1}, "material": {"color": [0, 0, 1]},'
                      ' "provenance": {"node": "_:b0", "type": "<t>"}}'),
            "line 2: shape.sphere.radius",
        ),
        (
            _bad_node('{"shape": {"kind": "sphere", "radius": 1}, "material": {"color": [0, 0, 2]},'
                      ' "provenance": {"node": "_:b0", "type": "<t>"}}'),
            "line 2: material.color",
        ),
        (
            _bad_node('{"shape": {"kind": "mesh", "level": 1, "vertices": [[0, 0, 0]],'
                      ' "triangles": [[0, 1, 2]]}, "material": {"color": [0, 0, 1]},'
                      ' "provenance": {"node": "_:b0", "type": "<t>"}}'),
            "indexes outside 1 vertices",
        ),
    ],
)
def test_malformed_scene_files(text, fragment):
    with pytest.raises(SceneFormatError, match=fragment):
        load_scene(text)


def test_missing_scene_file(tmp_path):
    with pytest.raises(SceneFormatError, match="cannot read scene"):
        read_scene(tmp_path / "missing.jsonl")
