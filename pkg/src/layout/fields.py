"""
Fields for global visual objects, rebuilt from their :inputData samples.
"""

from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

from src.datasets.grid import FieldGrid
from src.errors import InputError, LayoutError
from src.logging import logger
from src.rdf.graph import Graph
from src.rdf.terms import INPUT_DATA, LOCATION, VALUE, VX, VY, VZ, Literal, Node
from src.techniques.spec import LayoutParams

# Maps a sample location node to its point
PointResolver = Callable[[Node], "np.ndarray"]


@dataclass
class SampleSet:
    """Sample positions with scalar values and, for vector data, components."""
    points: np.ndarray
    values: np.ndarray
    vectors: Optional[np.ndarray] = None

    def __len__(self) -> int:
        return len(self.points)


def _number(graph: Graph, node: Node, predicate) -> Optional[float]:
    term = graph.value(node, predicate)
    if isinstance(term, Literal) and term.is_number:
        return float(term.value)
    return None


def collect_samples(graph: Graph, node: Node, locate: PointResolver) -> SampleSet:
    """
    Gather the samples linked from a global visual node.

    Raises:
        LayoutError: If a sample has no numeric value or no location, or
            only some samples carry vector components
    """
    points, values, vectors = [], [], []
    for sample in graph.objects(node, INPUT_DATA):
        value = _number(graph, sample, VALUE)
        location = graph.value(sample, LOCATION)
        if value is None or location is None:
            raise LayoutError(f"sample {sample} needs a numeric :value and a :location", str(node))
        points.append(locate(location))
        values.append(value)
        components = [_number(graph, sample, p) for p in (VX, VY, VZ)]
        if all(c is not None for c in components):
            vectors.append(components)
    if vectors and len(vectors) != len(points):
        raise LayoutError("samples mix scalar and vector values", str(node))
    return SampleSet(
        points=np.asarray(points, dtype=float).reshape(-1, 3),
        values=np.asarray(values, dtype=float),
        vectors=np.asarray(vectors, dtype=float) if vectors else None,
    )


def scalar_field(samples: SampleSet, params: LayoutParams, node: str = "") -> FieldGrid:
    """
    Scalar grid from samples: taken as is when they form a full lattice,
    otherwise resampled by inverse-distance weighting onto the
    resample-origin/-spacing/-dims grid.

    Raises:
        LayoutError: If there are no samples, or scattered samples come
            without resample parameters
    """
    if len(samples) == 0:
        raise LayoutError("no input samples", node)
    grid = FieldGrid.from_samples(samples.points, samples.values)
    if grid is not None and all(d >= 2 for d in grid.dims):
        logger.debug(f"🧮 {node}: samples form a {grid.dims} lattice")
        return grid
    if params.resample_origin is None or params.resample_spacing is None or params.resample_dims is None:
        raise LayoutError(
            "samples are scattered; set resample-origin, resample-spacing and resample-dims", node
        )
    try:
        grid = FieldGrid.resample_idw(
            samples.points, samples.values,
            params.resample_origin, params.resample_spacing, params.resample_dims,
        )
    except InputError as e:
        raise LayoutError(str(e), node) from None
    logger.debug(f"🧮 {node}: resampled {len(samples)} sample(s) onto {grid.dims}")
    return grid


def vector_field(samples: SampleSet, node: str = "") -> FieldGrid:
    """
    Vector grid from samples on a full lattice.

    Raises:
        LayoutError: If samples carry no vectors or are not on a lattice
    """
    if len(samples) == 0:
        raise LayoutError("no input samples", node)
    if samples.vectors is None:
        raise LayoutError("samples carry no :vx/:vy/:vz components", node)
    grid = FieldGrid.from_samples(samples.points, samples.vectors)
    if grid is None:
        raise LayoutError("vector samples do not form a regular lattice", node)
    return grid


def parse_seeds(text: str, node: str = "") -> List[np.ndarray]:
    """Seeds written as ``x y z; x y z`` (commas also separate)."""
    seeds = []
    for group in text.replace(",", ";").split(";"):
        if not group.strip():
            continue
        try:
            values = [float(v) for v in group.split()]
        except ValueError:
            raise LayoutError(f"bad seed '{group.strip()}'", node) from None
        if len(values) != 3:
            raise LayoutError(f"seed needs 3 coordinates, got '{group.strip()}'", node)
        seeds.append(np.asarray(values))
    if not seeds:
        raise LayoutError("no seeds", node)
    return seeds


__all__ = ["SampleSet", "collect_samples", "scalar_field", "vector_field", "parse_seeds"]
