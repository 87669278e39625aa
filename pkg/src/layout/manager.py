"""
Layout manager: turns an abstract visual graph into a concrete scene.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional, Tuple

from src.citymodel.geometry_index import GeometryIndex
from src.errors import InvariantViolation
from src.layout.registry import LayoutContext, SolverRegistry, get_solver_registry
from src.layout.scene import ConcreteScene, SceneNode
from src.logging import logger
from src.rdf.serialization import render_term
from src.rdf.terms import IRI, Node
from src.techniques.mapper import AbstractVisualGraph, visual_nodes
from src.techniques.spec import EmitHints, LayoutParams
from src.techniques.vocabulary import AbstractVocabulary, get_vocabulary


def _jobs(abstract: AbstractVisualGraph, vocabulary: AbstractVocabulary) -> List[Tuple[Node, IRI]]:
    jobs = []
    for node in visual_nodes(abstract.graph, vocabulary):
        type_iri = next(t for t in abstract.graph.types(node) if t in vocabulary.entries)
        jobs.append((node, type_iri))
    # scene order must not depend on triple insertion order
    return sorted(jobs, key=lambda job: render_term(job[0]))


def layout_scene(
    abstract: AbstractVisualGraph,
    index: GeometryIndex,
    params: Optional[LayoutParams] = None,
    emit: Optional[EmitHints] = None,
    workers: Optional[int] = None,
    registry: Optional[SolverRegistry] = None,
    vocabulary: Optional[AbstractVocabulary] = None,
) -> ConcreteScene:
    """
    Place every abstract visual node.

    Nodes are solved independently (in a thread pool when ``workers`` > 1)
    and merged in abstract-node order; scene node ids are ``n0, n1, ...``.

    Args:
        abstract: Validated abstract visual graph
        index: Geometry index of the city model
        params: Layout parameters (technique defaults if None)
        emit: Emit hints supplying default colors and transparency
        workers: Thread count; defaults to ``params.workers``

    Returns:
        ConcreteScene with provenance on every node

    Raises:
        LayoutError: If a type has no solver or a solver fails
        InvariantViolation: If an abstract node produced no scene node
    """
    params = params or LayoutParams()
    emit = emit or EmitHints()
    vocabulary = vocabulary or get_vocabulary()
    registry = registry or get_solver_registry()
    workers = workers or params.workers
    context = LayoutContext(abstract.graph, index, params, emit, vocabulary, registry)

    start_time = time.time()
    jobs = _jobs(abstract, vocabulary)
    logger.info(f"📏 Laying out {len(jobs)} abstract node(s) with {workers} worker(s)")

    def solve(job: Tuple[Node, IRI]) -> List[SceneNode]:
        return registry.solve(job[0], job[1], context)

    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(solve, jobs))
    else:
        results = [solve(job) for job in jobs]

    nodes: List[SceneNode] = []
    for (node, _), produced in zip(jobs, results):
        if not produced:
            raise InvariantViolation(f"abstract node {render_term(node)} produced no scene node")
        for scene_node in produced:
            nodes.append(scene_node.model_copy(update={"id": f"n{len(nodes)}"}))

    logger.info(
        f"✅ Layout: {len(nodes)} scene node(s) from {len(jobs)} abstract node(s) "
        f"in {time.time() - start_time:.2f}s"
    )
    return ConcreteScene(source=abstract.technique, nodes=nodes)


__all__ = ["layout_scene"]
