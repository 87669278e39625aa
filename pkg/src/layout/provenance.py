"""
Provenance summaries: the part of an abstract node's description that the
scene keeps so the abstract view can be rebuilt from the scene alone.
"""

from typing import List, Optional

from src.rdf.graph import Graph
from src.rdf.serialization import render_term
from src.rdf.terms import (
    ARG1,
    ARG2,
    COLOR,
    DERIVED_FROM,
    ENDPOINT,
    INPUT_DATA,
    IRI,
    LOCATION,
    Literal,
    Node,
    POINT,
    POSLIST_VIZ,
    REGION,
    SEEDS,
    Term,
    VALUE,
    VX,
    VY,
    VZ,
    XCOORD,
    YCOORD,
    ZCOORD,
)
from src.layout.scene import LocationRef, Provenance, SampleRef
from src.techniques.vocabulary import AbstractVocabulary


def _number(graph: Graph, node: Term, predicate: IRI) -> Optional[float]:
    term = graph.value(node, predicate)
    if isinstance(term, Literal) and term.is_number:
        return float(term.value)
    return None


def location_kind(graph: Graph, loc: Term, vocabulary: AbstractVocabulary) -> str:
    types = set(graph.types(loc))
    if any(t in vocabulary.relations for t in types):
        return "relation"
    if POINT in types or graph.objects(loc, XCOORD):
        return "point"
    if REGION in types or graph.objects(loc, POSLIST_VIZ):
        return "region"
    return "object"


def summarize_location(graph: Graph, loc: Term, vocabulary: AbstractVocabulary) -> LocationRef:
    """Snapshot of a location or endpoint node as written in the abstract graph."""
    coords = [_number(graph, loc, c) for c in (XCOORD, YCOORD, ZCOORD)]
    poslist = graph.value(loc, POSLIST_VIZ)
    arg1 = graph.value(loc, ARG1)
    arg2 = graph.value(loc, ARG2)
    return LocationRef(
        kind=location_kind(graph, loc, vocabulary),
        node=render_term(loc),
        types=sorted(render_term(t) for t in graph.types(loc)),
        coords=tuple(coords) if all(c is not None for c in coords) else None,
        poslist=poslist.value if isinstance(poslist, Literal) and not poslist.is_number else None,
        arg1=render_term(arg1) if arg1 is not None else None,
        arg2=render_term(arg2) if arg2 is not None else None,
    )


def summarize_samples(graph: Graph, node: Node, vocabulary: AbstractVocabulary) -> List[SampleRef]:
    samples = []
    for sample in sorted(graph.objects(node, INPUT_DATA), key=render_term):
        components = [_number(graph, sample, p) for p in (VX, VY, VZ)]
        samples.append(SampleRef(
            node=render_term(sample),
            value=_number(graph, sample, VALUE),
            vector=tuple(components) if all(c is not None for c in components) else None,
            location=summarize_location(graph, graph.value(sample, LOCATION), vocabulary),
        ))
    return samples


def summarize_node(
    graph: Graph,
    node: Node,
    type_iri: IRI,
    vocabulary: AbstractVocabulary,
    part: int = 0,
    parts: int = 1,
) -> Provenance:
    """
    Provenance record for scene node ``part`` of ``parts`` realizing ``node``.
    """
    color = graph.value(node, COLOR)
    location = graph.value(node, LOCATION)
    seeds = graph.value(node, SEEDS)
    return Provenance(
        node=render_term(node),
        type=render_term(type_iri),
        part=part,
        parts=parts,
        color_node=render_term(color) if color is not None else None,
        location=summarize_location(graph, location, vocabulary) if location is not None else None,
        endpoints=[
            summarize_location(graph, target, vocabulary)
            for target in sorted(graph.objects(node, ENDPOINT), key=render_term)
        ],
        samples=summarize_samples(graph, node, vocabulary) if part == 0 else [],
        seeds=seeds.value if isinstance(seeds, Literal) and not seeds.is_number else None,
        sources=sorted(render_term(s) for s in graph.objects(node, DERIVED_FROM)),
    )


__all__ = ["location_kind", "summarize_location", "summarize_samples", "summarize_node"]
