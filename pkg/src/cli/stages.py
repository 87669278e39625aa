"""
Pipeline stages over their file formats.

Every stage takes and returns the text of the documented files (serialized
graphs, scene JSON Lines, the emitted document), so running the commands one
by one and running ``pipeline`` produce byte-identical results.
"""

from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

from src.citymodel import extract_geometry_index, read_citygml
from src.datasets import (
    ingest_grid_field,
    ingest_object_data,
    ingest_point_data,
    ingest_region_data,
    ingest_relation_data,
    load_dictionary,
    load_regions,
    read_table,
)
from src.emit import get_emitter
from src.errors import DatasetError
from src.layout import dump_scene, layout_scene, load_scene
from src.rdf.graph import Store
from src.rdf.serialization import parse_graph, serialize_graph
from src.rdf.terms import IRI
from src.techniques import AbstractVisualGraph, TechniqueSpec, apply_technique

MODEL_GRAPH = "model"
CITYGML_SUFFIXES = (".gml", ".xml", ".citygml")

PathLike = Union[str, Path]


def _read_text(path: PathLike, what: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise DatasetError(f"cannot read {what} {path}: {e.strerror}") from None


def write_text(path: PathLike, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)


# ============================================================================
# Stage 1: city model
# ============================================================================


def convert_model(path: PathLike) -> str:
    """CityGML file to serialized graph text."""
    return serialize_graph(read_citygml(path).graph)


def load_model_text(path: PathLike) -> str:
    """Serialized model graph from either a CityGML file or a converted graph file."""
    if Path(path).suffix.lower() in CITYGML_SUFFIXES:
        return convert_model(path)
    return _read_text(path, "model graph")


# ============================================================================
# Stage 2: datasets
# ============================================================================


def ingest_dataset(
    path: PathLike,
    kind: str,
    type_iri: IRI,
    id_prefix: str,
    loc_prefix: str,
    dictionary: Optional[PathLike] = None,
    regions: Optional[PathLike] = None,
    model_text: Optional[str] = None,
) -> str:
    """
    One dataset file to serialized graph text.

    Object and relation references are checked against the model graph
    when ``model_text`` is given.

    Raises:
        DatasetError: On an unknown kind, a missing side file or bad rows
        DictionaryError: On unresolvable references
    """
    model = parse_graph(model_text) if model_text is not None else None
    if kind == "grid":
        graph, _ = ingest_grid_field(_read_text(path, "grid field"), type_iri, id_prefix, loc_prefix)
        return serialize_graph(graph)

    table = read_table(path)
    if kind == "point":
        graph = ingest_point_data(table, type_iri, id_prefix, loc_prefix)
    elif kind == "region":
        if regions is None:
            raise DatasetError("region data needs a regions file (--regions)")
        graph = ingest_region_data(table, type_iri, load_regions(read_table(regions)), id_prefix, loc_prefix)
    elif kind in ("object", "relation"):
        if dictionary is None:
            raise DatasetError(f"{kind} data needs a dictionary (--dict)")
        entries = load_dictionary(read_table(dictionary))
        ingest = ingest_object_data if kind == "object" else ingest_relation_data
        graph = ingest(table, type_iri, entries, id_prefix, model=model)
    else:
        raise DatasetError(f"unknown data kind '{kind}'")
    return serialize_graph(graph)


# ============================================================================
# Stages 3-5: technique, layout, emission
# ============================================================================


def apply_stage(model_text: str, datasets: Sequence[Tuple[str, str]], spec: TechniqueSpec) -> Tuple[str, int]:
    """
    Run the technique over the model and the named dataset graphs.

    Returns:
        (serialized abstract graph, visual node count)
    """
    model = parse_graph(model_text)
    store = Store()
    store.add_graph(MODEL_GRAPH, model)
    for name, text in datasets:
        store.add_graph(name, parse_graph(text))
    store.freeze()
    abstract = apply_technique(store, spec, model=model, datasets=[name for name, _ in datasets])
    return serialize_graph(abstract.graph), len(abstract.visual_nodes())


def layout_stage(model_text: str, abstract_text: str, spec: TechniqueSpec) -> Tuple[str, int]:
    """
    Returns:
        (scene JSON Lines, scene node count)
    """
    index = extract_geometry_index(parse_graph(model_text))
    abstract = AbstractVisualGraph.from_graph(parse_graph(abstract_text), spec.name)
    scene = layout_scene(abstract, index, spec.layout, spec.emit)
    return dump_scene(scene), len(scene)


def emit_stage(model_text: str, scene_text: str, spec: TechniqueSpec, output_format: str) -> str:
    """Final document text in ``output_format`` (x3d or x3dom)."""
    emitter = get_emitter(output_format)
    index = extract_geometry_index(parse_graph(model_text))
    return emitter.emit(load_scene(scene_text), index, spec.emit).text


def dataset_name(path: PathLike) -> str:
    """Store graph name of a dataset file passed on the command line."""
    return Path(path).stem


def count_triples(text: str) -> int:
    return sum(1 for line in text.splitlines() if line.strip())


__all__ = [
    "MODEL_GRAPH",
    "apply_stage",
    "convert_model",
    "count_triples",
    "dataset_name",
    "emit_stage",
    "ingest_dataset",
    "layout_stage",
    "load_model_text",
    "write_text",
]
