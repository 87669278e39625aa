"""
Schema discrimination for ingested data graphs.
"""

from typing import Dict, List, Optional

from src.errors import ClassificationError
from src.rdf.graph import Graph
from src.rdf.terms import ABOUT, ARG1, ARG2, LOCATION, Node, REGION, VALUE


def data_elements(graph: Graph) -> List[Node]:
    """Subjects carrying :value, :location, :about or :arg1/:arg2, in first-seen order."""
    seen: Dict[Node, None] = {}
    for predicate in (VALUE, LOCATION, ABOUT, ARG1, ARG2):
        for subject in graph.subjects(predicate):
            seen[subject] = None
    return list(seen)


def element_kind(graph: Graph, node: Node) -> str:
    """
    Kind of one data element: point, region, object or relation.

    Raises:
        ClassificationError: If the node mixes schemas or matches none
    """
    has_location = bool(graph.objects(node, LOCATION))
    has_about = bool(graph.objects(node, ABOUT))
    has_args = bool(graph.objects(node, ARG1)) or bool(graph.objects(node, ARG2))
    matched = [has_location, has_about, has_args]
    if sum(matched) > 1:
        raise ClassificationError(f"data element {node} mixes :location, :about and :arg1/:arg2")
    if has_about:
        return "object"
    if has_args:
        if not (graph.objects(node, ARG1) and graph.objects(node, ARG2)):
            raise ClassificationError(f"relation element {node} needs both :arg1 and :arg2")
        return "relation"
    if has_location:
        location = graph.objects(node, LOCATION)[0]
        return "region" if REGION in graph.types(location) else "point"
    raise ClassificationError(f"data element {node} has no :location, :about or :arg1/:arg2")


def derive_kind(graph: Graph) -> Optional[str]:
    """
    Re-derive the dataset kind from the graph.

    Returns:
        "point", "region", "object" or "relation"; None for an empty dataset

    Raises:
        ClassificationError: If elements disagree or match no schema
    """
    kinds = {element_kind(graph, node) for node in data_elements(graph)}
    if not kinds:
        return None
    if len(kinds) > 1:
        raise ClassificationError(f"dataset mixes schemas: {', '.join(sorted(kinds))}")
    return kinds.pop()
