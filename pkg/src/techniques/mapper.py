"""
Abstract-level mapping: dataset classification, technique application and
validation of the abstract visual graph.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Set, Tuple

from src.citymodel.geometry_index import parse_poslist
from src.errors import AbstractValidationError, ClassificationError, InputError, InvariantViolation
from src.logging import logger
from src.rdf.evaluator import ConstructInstance, ConstructWarning, eval_construct_traced
from src.rdf.graph import Graph, Store
from src.rdf.query import Query, Variable
from src.rdf.terms import (
    ARG1,
    ARG2,
    BLUE,
    CGML,
    COLOR,
    COLOR_TYPE,
    CONTENT,
    DERIVED_FROM,
    ENDPOINT,
    GREEN,
    HEIGHT,
    INPUT_DATA,
    IRI,
    LEVELS,
    LOCATION,
    Literal,
    Node,
    POINT,
    POSLIST_VIZ,
    RADIUS,
    RDF_TYPE,
    RED,
    REGION,
    SEEDS,
    Triple,
    VALUE,
    VX,
    VY,
    VZ,
    XCOORD,
    YCOORD,
    ZCOORD,
    BNode,
    compact,
)
from src.techniques.spec import DataCase, TechniqueSpec
from src.techniques.vocabulary import FLOWLINES, ISOSURFACE, AbstractVocabulary, get_vocabulary
from src.datasets.schema import derive_kind
from src.utils.numbers import format_vector

COORDS = (XCOORD, YCOORD, ZCOORD)
POSITIVE = (RADIUS, HEIGHT)

# Properties of a visual node that belong to its abstract description
VISUAL_PROPERTIES = (RADIUS, HEIGHT, CONTENT, COLOR, LOCATION, ENDPOINT, INPUT_DATA, LEVELS, SEEDS)


@dataclass(frozen=True)
class Violation:
    """
    One failed abstract-graph invariant.

    ``from_data`` marks a well-formed node whose value is out of range for its
    property (a count of 0 mapped to a height); such nodes are dropped
    instead of failing the run.
    """
    node: str
    message: str
    subject: Optional[Node] = field(default=None, compare=False, repr=False)
    from_data: bool = False

    def __str__(self) -> str:
        return f"{self.node}: {self.message}"


@dataclass
class AbstractVisualGraph:
    """
    Output of the abstract level.

    ``graph`` carries :derivedFrom links from every constructed node to the
    data elements it came from; ``provenance`` is the same map in Python form.
    """
    graph: Graph
    provenance: Dict[Node, List[Node]] = field(default_factory=dict)
    warnings: List[ConstructWarning] = field(default_factory=list)
    technique: str = ""

    def visual_nodes(self, vocabulary: Optional[AbstractVocabulary] = None) -> List[Node]:
        return visual_nodes(self.graph, vocabulary)

    @classmethod
    def from_graph(cls, graph: Graph, technique: str = "") -> "AbstractVisualGraph":
        """Rebuild the provenance map from :derivedFrom triples (e.g. after reading a file)."""
        provenance: Dict[Node, List[Node]] = {}
        for t in graph.triples(None, DERIVED_FROM, None):
            provenance.setdefault(t.subject, []).append(t.object)
        return cls(graph=graph, provenance=provenance, technique=technique)


def visual_nodes(graph: Graph, vocabulary: Optional[AbstractVocabulary] = None) -> List[Node]:
    """Nodes typed with a registered visual type, in first-seen order."""
    vocabulary = vocabulary or get_vocabulary()
    seen: Dict[Node, None] = {}
    for t in graph.triples(None, RDF_TYPE, None):
        if t.object in vocabulary.entries:
            seen[t.subject] = None
    return list(seen)


# ============================================================================
# Classification
# ============================================================================


def classify_dataset(data: Graph, complex_technique: bool = False) -> DataCase:
    """
    Map a dataset graph to its data/representation case.

    Args:
        data: Dataset graph following one of the data schemas
        complex_technique: Whether the technique builds a complex visual object

    Raises:
        ClassificationError: On mixed, unrecognizable or empty datasets
    """
    kind = derive_kind(data)
    if kind is None:
        raise ClassificationError("cannot classify an empty dataset")
    if kind in ("point", "region"):
        return DataCase.SPATIAL_GLOBAL if complex_technique else DataCase.SPATIAL_INDIVIDUAL
    if kind == "object":
        return DataCase.OBJECT_RELATED
    return DataCase.OBJECT_RELATION


# ============================================================================
# Validation
# ============================================================================


def is_city_object(model: Graph, node) -> bool:
    """An IRI typed with a CityGML class in the model graph."""
    if not isinstance(node, IRI):
        return False
    return any(t.value.startswith(CGML) for t in model.types(node))


def _is_number(term) -> bool:
    return isinstance(term, Literal) and term.is_number


class _Validator:
    def __init__(self, graph: Graph, model: Graph, vocabulary: AbstractVocabulary):
        self.graph = graph
        self.model = model
        self.vocabulary = vocabulary
        self.violations: List[Violation] = []

    def report(self, node, message: str, from_data: bool = False) -> None:
        label = compact(node) if isinstance(node, IRI) else str(node)
        self.violations.append(Violation(label, message, node, from_data))

    def point_form(self, loc) -> Optional[str]:
        """Problem with a point location, or None."""
        for coord in COORDS:
            values = self.graph.objects(loc, coord)
            if len(values) != 1 or not _is_number(values[0]):
                return f"point location needs exactly one numeric {compact(coord)}"
        return None

    def region_form(self, loc) -> Optional[str]:
        values = self.graph.objects(loc, POSLIST_VIZ)
        if len(values) != 1 or not isinstance(values[0], Literal) or values[0].is_number:
            return "region location needs exactly one :posList string"
        try:
            parse_poslist(values[0].value)
        except InputError as e:
            return f"region location: {e}"
        return None

    def relation_form(self, loc) -> Optional[str]:
        args = [self.graph.objects(loc, ARG1), self.graph.objects(loc, ARG2)]
        if any(len(a) != 1 for a in args):
            return "relation needs exactly one :arg1 and one :arg2"
        if not any(is_city_object(self.model, a[0]) for a in args):
            return "relation has no city-object argument"
        return None

    def location(self, owner, loc, relation_only: bool = False) -> None:
        types = set(self.graph.types(loc))
        relations = [t for t in types if t in self.vocabulary.relations]
        if relations:
            problem = self.relation_form(loc)
        elif relation_only:
            problem = "location must be a spatial relation"
        elif POINT in types or any(self.graph.objects(loc, c) for c in COORDS):
            problem = self.point_form(loc)
        elif REGION in types:
            problem = self.region_form(loc)
        elif is_city_object(self.model, loc):
            problem = None
        else:
            problem = f"location {loc} is not a point, region, relation or city object"
        if problem:
            self.report(owner, problem)

    def color(self, node, color) -> None:
        if not isinstance(color, (IRI, BNode)) or COLOR_TYPE not in self.graph.types(color):
            self.report(node, ":color must be a :Color node")
            return
        for channel in (RED, GREEN, BLUE):
            values = self.graph.objects(color, channel)
            if len(values) != 1 or not _is_number(values[0]):
                self.report(node, f"color channel {compact(channel)} must be one number in [0, 1]")
            elif not 0 <= values[0].value <= 1:
                self.report(node, f"color channel {compact(channel)} is {values[0]}, outside [0, 1]", from_data=True)

    def endpoint(self, node, target) -> None:
        if is_city_object(self.model, target):
            return
        if POINT in self.graph.types(target) or self.graph.objects(target, XCOORD):
            problem = self.point_form(target)
            if problem:
                self.report(node, f"endpoint {problem}")
            return
        self.report(node, f"endpoint {target} is neither a city object nor a point")

    def sample(self, node, sample) -> None:
        values = self.graph.objects(sample, VALUE)
        if len(values) != 1 or not _is_number(values[0]):
            self.report(node, f"input sample {sample} needs one numeric :value")
        locations = self.graph.objects(sample, LOCATION)
        if len(locations) != 1:
            self.report(node, f"input sample {sample} needs one :location")
            return
        self.location(node, locations[0])

    def visual(self, node) -> None:
        types = [t for t in self.graph.types(node) if t in self.vocabulary.entries]
        if len(types) > 1:
            self.report(node, "node has more than one visual type")
        entry = self.vocabulary.get(types[0])
        for prop in entry.required:
            if not self.graph.objects(node, prop):
                self.report(node, f"{entry.name} is missing required property {compact(prop)}")
        for prop in entry.numeric:
            for value in self.graph.objects(node, prop):
                if not _is_number(value):
                    self.report(node, f"{compact(prop)} must be numeric, got {value}")
                elif prop in POSITIVE and value.value <= 0:
                    self.report(node, f"{compact(prop)} must be positive, got {value}", from_data=True)
        for color in self.graph.objects(node, COLOR):
            self.color(node, color)

        locations = self.graph.objects(node, LOCATION)
        if entry.location_mode in ("point", "relation"):
            if len(locations) != 1:
                self.report(node, f"{entry.name} needs exactly one :location")
            for loc in locations:
                self.location(node, loc, relation_only=entry.location_mode == "relation")
        elif entry.location_mode == "endpoints":
            endpoints = self.graph.objects(node, ENDPOINT)
            if len(endpoints) != 2:
                self.report(node, f"{entry.name} needs exactly two :endpoint links, got {len(endpoints)}")
            for target in endpoints:
                self.endpoint(node, target)
        else:
            for sample in self.graph.objects(node, INPUT_DATA):
                self.sample(node, sample)

    def dangling(self) -> None:
        for predicate in (LOCATION, ENDPOINT, ARG1, ARG2):
            for t in self.graph.triples(None, predicate, None):
                target = t.object
                if isinstance(target, IRI) and not self.graph.has_subject(target) \
                        and not is_city_object(self.model, target):
                    self.report(t.subject, f"dangling reference {compact(target)}")

    def run(self) -> List[Violation]:
        for node in visual_nodes(self.graph, self.vocabulary):
            self.visual(node)
        self.dangling()
        return self.violations


def validate_abstract(
    graph: Graph,
    model: Graph,
    vocabulary: Optional[AbstractVocabulary] = None,
) -> List[Violation]:
    """
    Check the abstract visual graph invariants.

    Args:
        graph: Abstract visual graph
        model: City model graph (for city-object references)

    Returns:
        Violations; empty when the graph is valid
    """
    return _Validator(graph, model, vocabulary or get_vocabulary()).run()


# ============================================================================
# Vocabulary subgraph
# ============================================================================


def _location_triples(graph: Graph, loc, out: Graph) -> None:
    for t in graph.triples(loc, RDF_TYPE, None):
        out.add(t)
    for predicate in COORDS + (POSLIST_VIZ, ARG1, ARG2):
        for t in graph.triples(loc, predicate, None):
            out.add(t)


def vocabulary_subgraph(graph: Graph, vocabulary: Optional[AbstractVocabulary] = None) -> Graph:
    """
    The part of an abstract graph that describes visual objects: their
    type, visual properties, colors, locations and input samples.
    """
    vocabulary = vocabulary or get_vocabulary()
    out = Graph()
    for node in visual_nodes(graph, vocabulary):
        for t in graph.triples(node, RDF_TYPE, None):
            if t.object in vocabulary.entries:
                out.add(t)
        for predicate in VISUAL_PROPERTIES:
            for t in graph.triples(node, predicate, None):
                out.add(t)
                target = t.object
                if predicate == COLOR:
                    for ct in graph.triples(target, None, None):
                        if ct.predicate in (RDF_TYPE, RED, GREEN, BLUE):
                            out.add(ct)
                elif predicate in (LOCATION, ENDPOINT):
                    _location_triples(graph, target, out)
                elif predicate == INPUT_DATA:
                    for st in graph.triples(target, None, None):
                        if st.predicate in (VALUE, VX, VY, VZ, LOCATION):
                            out.add(st)
                            if st.predicate == LOCATION:
                                _location_triples(graph, st.object, out)
    return out


# ============================================================================
# Application
# ============================================================================


def provenance_variable(query: Query) -> Optional[str]:
    """
    The pattern variable naming the data element.

    Prefers the subject of a :value pattern, then the subject of a type
    pattern, then the first subject variable.
    """
    for predicate in (VALUE, RDF_TYPE):
        for tp in query.pattern:
            if tp.predicate == predicate and isinstance(tp.subject, Variable):
                return tp.subject.name
    for tp in query.pattern:
        if isinstance(tp.subject, Variable):
            return tp.subject.name
    return None


def _close_locations(graph: Graph, store_graph: Graph, fresh: Set[Node]) -> int:
    """Copy referenced data locations into the abstract graph."""
    copied = 0
    targets = [t.object for p in (LOCATION, ENDPOINT) for t in graph.triples(None, p, None)]
    for target in targets:
        if target in fresh or isinstance(target, Literal):
            continue
        types = store_graph.types(target)
        if POINT not in types and REGION not in types:
            continue
        for t in store_graph.triples(target, RDF_TYPE, None):
            if t.object in (POINT, REGION):
                copied += graph.add(t)
        for predicate in COORDS + (POSLIST_VIZ,):
            for t in store_graph.triples(target, predicate, None):
                copied += graph.add(t)
    return copied


def _inject_parameters(graph: Graph, spec: TechniqueSpec) -> None:
    for node in graph.subjects(RDF_TYPE, ISOSURFACE):
        if not graph.objects(node, LEVELS):
            for level in spec.layout.iso_levels or ():
                graph.add(Triple(node, LEVELS, Literal(level)))
    for node in graph.subjects(RDF_TYPE, FLOWLINES):
        if not graph.objects(node, SEEDS) and spec.layout.seeds:
            text = "; ".join(format_vector(seed) for seed in spec.layout.seeds)
            graph.add(Triple(node, SEEDS, Literal(text)))


def _assemble(
    instances: Sequence[ConstructInstance],
    union: Graph,
    spec: TechniqueSpec,
    var: Optional[str],
) -> Tuple[Graph, Dict[Node, List[Node]], int]:
    """Abstract graph, provenance map and copied-location count for the kept instances."""
    graph = Graph()
    for instance in instances:
        for triple in instance.triples:
            graph.add(triple)
    fresh: Set[Node] = {b for instance in instances for b in instance.blanks.values()}
    copied = _close_locations(graph, union, fresh)
    _inject_parameters(graph, spec)

    provenance: Dict[Node, List[Node]] = {}
    if var is not None:
        for instance in instances:
            source = instance.binding.get(var)
            if not isinstance(source, (IRI, BNode)):
                continue
            for triple in instance.triples:
                sources = provenance.setdefault(triple.subject, [])
                if source not in sources:
                    sources.append(source)
    for node, sources in provenance.items():
        for source in sources:
            graph.add(Triple(node, DERIVED_FROM, source))
    return graph, provenance, copied


def apply_technique(
    store: Store,
    spec: TechniqueSpec,
    model: Optional[Graph] = None,
    datasets: Optional[Sequence[str]] = None,
    vocabulary: Optional[AbstractVocabulary] = None,
) -> AbstractVisualGraph:
    """
    Run a technique's construct query and validate the abstract graph.

    Args:
        store: Frozen store holding the city model and datasets
        spec: Parsed technique
        model: City model graph; defaults to the store union
        datasets: Dataset graphs to classify against the technique case;
            defaults to the query's ``from`` graph

    Bindings whose visual node carries an out-of-range value (a zero height,
    a color channel outside [0, 1]) are dropped as a whole and reported in
    ``warnings``; the other bindings still make up the visualization.

    Returns:
        AbstractVisualGraph with provenance links

    Raises:
        InvariantViolation: If the store is not frozen
        ClassificationError: If the dataset does not fit the technique case
        AbstractValidationError: If the result breaks the structural invariants
    """
    if not store.frozen:
        raise InvariantViolation("apply_technique needs a frozen store")
    vocabulary = vocabulary or get_vocabulary()
    union = store.graph()
    model = model if model is not None else union

    if datasets is None:
        datasets = [spec.query.from_graph] if spec.query.from_graph else []
    for dataset in datasets:
        data = store.graph(dataset)
        if derive_kind(data) is not None:
            case = classify_dataset(data, spec.constructs_complex(vocabulary))
            if case != spec.case:
                raise ClassificationError(
                    f"dataset {dataset} is {case.value} but technique {spec.name} expects {spec.case.value}"
                )

    result = eval_construct_traced(store, spec.query)
    var = provenance_variable(spec.query)
    warnings = list(result.warnings)
    kept = list(enumerate(result.instances))

    while True:
        graph, provenance, copied = _assemble([instance for _, instance in kept], union, spec, var)
        violations = validate_abstract(graph, model, vocabulary)
        bad = {v.subject: v for v in violations if v.from_data}
        if not bad:
            break
        remaining = []
        for index, instance in kept:
            hit = next((bad[t.subject] for t in instance.triples if t.subject in bad), None)
            if hit is None:
                remaining.append((index, instance))
                continue
            logger.warning(f"⚠️ Dropped binding {index}: {hit}")
            warnings.append(ConstructWarning(index, None, f"dropped {hit}"))
        if len(remaining) == len(kept):
            break
        kept = remaining

    if violations:
        for violation in violations:
            logger.error(f"❌ {violation}")
        raise AbstractValidationError(violations)

    count = len(visual_nodes(graph, vocabulary))
    logger.info(
        f"🎨 Technique '{spec.name}': {len(result.instances)} binding(s) -> {count} visual node(s), "
        f"{len(graph)} triple(s), {copied} location triple(s) copied, {len(warnings)} warning(s)"
    )
    return AbstractVisualGraph(graph=graph, provenance=provenance, warnings=warnings, technique=spec.name)


__all__ = [
    "Violation",
    "AbstractVisualGraph",
    "visual_nodes",
    "classify_dataset",
    "is_city_object",
    "validate_abstract",
    "vocabulary_subgraph",
    "provenance_variable",
    "apply_technique",
]
