"""
Abstract view reconstruction from a concrete scene.

Each scene node is projected back to the vocabulary triples of the
abstract node it realizes: its type and visual properties from the shape
and material, its location, endpoints, samples and seeds from the stored
provenance.
"""

from src.errors import InvariantViolation
from src.layout.scene import ConcreteScene, ConeShape, LocationRef, MeshShape, PanelShape, SceneNode, SphereShape
from src.logging import logger
from src.rdf.graph import Graph
from src.rdf.serialization import parse_term
from src.rdf.terms import (
    ARG1,
    ARG2,
    BLUE,
    COLOR,
    COLOR_TYPE,
    CONTENT,
    ENDPOINT,
    GREEN,
    HEIGHT,
    INPUT_DATA,
    LEVELS,
    LOCATION,
    Literal,
    POSLIST_VIZ,
    RADIUS,
    RDF_TYPE,
    RED,
    SEEDS,
    Triple,
    VALUE,
    VX,
    VY,
    VZ,
    XCOORD,
    YCOORD,
    ZCOORD,
)


def _add_location(graph: Graph, ref: LocationRef):
    node = parse_term(ref.node)
    for type_text in ref.types:
        graph.add(Triple(node, RDF_TYPE, parse_term(type_text)))
    if ref.coords is not None:
        for predicate, value in zip((XCOORD, YCOORD, ZCOORD), ref.coords):
            graph.add(Triple(node, predicate, Literal(value)))
    if ref.poslist is not None:
        graph.add(Triple(node, POSLIST_VIZ, Literal(ref.poslist)))
    if ref.arg1 is not None:
        graph.add(Triple(node, ARG1, parse_term(ref.arg1)))
    if ref.arg2 is not None:
        graph.add(Triple(node, ARG2, parse_term(ref.arg2)))
    return node


def _project(graph: Graph, scene_node: SceneNode) -> None:
    prov = scene_node.provenance
    if not prov.node or not prov.type:
        raise InvariantViolation(f"scene node {scene_node.id} has no provenance")
    node = parse_term(prov.node)
    graph.add(Triple(node, RDF_TYPE, parse_term(prov.type)))

    shape = scene_node.shape
    if isinstance(shape, SphereShape):
        graph.add(Triple(node, RADIUS, Literal(shape.radius)))
    elif isinstance(shape, ConeShape):
        graph.add(Triple(node, HEIGHT, Literal(shape.height)))
    elif isinstance(shape, PanelShape):
        graph.add(Triple(node, CONTENT, Literal(shape.content)))
    elif isinstance(shape, MeshShape):
        graph.add(Triple(node, LEVELS, Literal(shape.level)))

    if prov.color_node is not None:
        color = parse_term(prov.color_node)
        graph.add(Triple(node, COLOR, color))
        graph.add(Triple(color, RDF_TYPE, COLOR_TYPE))
        for channel, value in zip((RED, GREEN, BLUE), scene_node.material.color):
            graph.add(Triple(color, channel, Literal(value)))

    if prov.location is not None:
        graph.add(Triple(node, LOCATION, _add_location(graph, prov.location)))
    for endpoint in prov.endpoints:
        graph.add(Triple(node, ENDPOINT, _add_location(graph, endpoint)))
    for sample in prov.samples:
        sample_node = parse_term(sample.node)
        graph.add(Triple(node, INPUT_DATA, sample_node))
        graph.add(Triple(sample_node, VALUE, Literal(sample.value)))
        if sample.vector is not None:
            for predicate, value in zip((VX, VY, VZ), sample.vector):
                graph.add(Triple(sample_node, predicate, Literal(value)))
        graph.add(Triple(sample_node, LOCATION, _add_location(graph, sample.location)))
    if prov.seeds is not None:
        graph.add(Triple(node, SEEDS, Literal(prov.seeds)))


def reconstruct_abstract(scene: ConcreteScene) -> Graph:
    """
    Rebuild the vocabulary-typed abstract graph from a scene.

    Raises:
        InvariantViolation: If a scene node has no provenance
    """
    graph = Graph()
    for scene_node in scene.nodes:
        _project(graph, scene_node)
    logger.debug(f"🔁 Reconstructed {len(graph)} abstract triple(s) from {len(scene)} scene node(s)")
    return graph


__all__ = ["reconstruct_abstract"]
