"""
Concrete-solver registry.

Every abstract visual type needs a solver ``(node, context) -> [SceneNode]``
and every spatial relation a relation solver
``(target, footprint, context) -> Placement``. Adding a visual type means
registering a vocabulary entry plus a solver here.
"""

import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from pydantic import ValidationError

from src.citymodel.geometry_index import CityObjectEntry, GeometryIndex
from src.errors import LayoutError
from src.layout.geometry import Point3
from src.layout.scene import SceneNode
from src.logging import logger
from src.rdf.graph import Graph
from src.rdf.serialization import render_term
from src.rdf.terms import IRI, Node
from src.techniques.spec import EmitHints, LayoutParams
from src.techniques.vocabulary import AbstractVocabulary


@dataclass(frozen=True)
class Placement:
    """
    Where a located object goes.

    ``anchor`` says which point of the object ``point`` is: ``native`` for
    the shape's own reference point, ``base`` for the bottom centre,
    ``center`` for the centre.
    """
    point: Point3
    facing: Optional[np.ndarray] = None
    anchor: str = "native"


@dataclass(frozen=True)
class LayoutContext:
    """Read-only inputs shared by all solvers of one layout run."""
    graph: Graph
    index: GeometryIndex
    params: LayoutParams
    emit: EmitHints
    vocabulary: AbstractVocabulary
    registry: "SolverRegistry"


Solver = Callable[[Node, LayoutContext], List[SceneNode]]
RelationSolver = Callable[[CityObjectEntry, Tuple[float, float], LayoutContext], Placement]


class SolverRegistry:
    """Maps visual types and relations to their concrete solvers."""

    def __init__(self):
        self._solvers: Dict[IRI, Solver] = {}
        self._relations: Dict[IRI, RelationSolver] = {}

    def register_solver(self, type_iri: IRI, func: Solver) -> None:
        """
        Register the solver for a visual type.

        Args:
            type_iri: Visual type (e.g. :Cone)
            func: Callable returning the scene nodes for one abstract node
        """
        self._solvers[type_iri] = func
        logger.debug(f"📝 Registered solver: {type_iri.local_name}")

    def register_relation(self, relation: IRI, func: RelationSolver) -> None:
        self._relations[relation] = func
        logger.debug(f"📝 Registered relation solver: {relation.local_name}")

    def get_solver(self, type_iri: IRI) -> Optional[Solver]:
        return self._solvers.get(type_iri)

    def get_relation(self, relation: IRI) -> Optional[RelationSolver]:
        return self._relations.get(relation)

    def solve(self, node: Node, type_iri: IRI, context: LayoutContext) -> List[SceneNode]:
        """
        Run the solver registered for ``type_iri`` on one abstract node.

        Raises:
            LayoutError: If no solver is registered, the solver fails or it
                builds an invalid shape; the error names the abstract node
        """
        name = render_term(node)
        func = self.get_solver(type_iri)
        if func is None:
            raise LayoutError(f"no concrete solver for visual type {type_iri.local_name}", name)

        start_time = time.time()
        try:
            nodes = func(node, context)
        except LayoutError as e:
            if e.node:
                raise
            logger.error(f"❌ {type_iri.local_name} {name}: {e}")
            raise type(e)(str(e), name) from None
        except ValidationError as e:
            first = e.errors()[0]
            where = ".".join(str(p) for p in first["loc"])
            message = f"invalid {type_iri.local_name} shape: {where}: {first['msg']}"
            logger.error(f"❌ {name}: {message}")
            raise LayoutError(message, name) from None
        logger.debug(
            f"✅ {type_iri.local_name} {name}: {len(nodes)} scene node(s) in {time.time() - start_time:.3f}s"
        )
        return nodes

    def place_relation(
        self,
        relation: IRI,
        target: CityObjectEntry,
        footprint: Tuple[float, float],
        context: LayoutContext,
    ) -> Placement:
        func = self.get_relation(relation)
        if func is None:
            raise LayoutError(f"no solver for relation {relation.local_name}")
        return func(target, footprint, context)

    def list_solvers(self) -> List[str]:
        return [t.local_name for t in self._solvers]

    def list_relations(self) -> List[str]:
        return [r.local_name for r in self._relations]

    def is_registered(self, type_iri: IRI) -> bool:
        return type_iri in self._solvers or type_iri in self._relations


_registry: Optional[SolverRegistry] = None


def get_solver_registry() -> SolverRegistry:
    """
    Process-wide registry with the built-in solvers loaded.

    Returns:
        SolverRegistry singleton
    """
    global _registry
    if _registry is None:
        # lazy import: solvers import this module
        from src.layout.solvers import register_builtins

        _registry = SolverRegistry()
        register_builtins(_registry)
    return _registry


def reset_solver_registry() -> None:
    """Drop runtime registrations (used by tests)."""
    global _registry
    _registry = None


__all__ = [
    "Placement",
    "LayoutContext",
    "Solver",
    "RelationSolver",
    "SolverRegistry",
    "get_solver_registry",
    "reset_solver_registry",
]
