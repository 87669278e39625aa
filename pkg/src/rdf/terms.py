"""
RDF terms, triples and the fixed namespace table.
"""

import math
from dataclasses import dataclass
from typing import Union

# Namespaces
VIZ = "http://city-viz-forge.org/ns#"
CGML = "http://www.opengis.net/citygml#"
GML = "http://www.opengis.net/gml#"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"

PREFIXES = {
    "": VIZ,
    "cgml": CGML,
    "gml": GML,
    "rdf": RDF,
}


@dataclass(frozen=True, slots=True)
class IRI:
    """An IRI node."""
    value: str

    def __post_init__(self):
        if not self.value:
            raise ValueError("IRI must be nonempty")

    def __str__(self) -> str:
        return f"<{self.value}>"

    @property
    def local_name(self) -> str:
        for sep in ("#", "/"):
            if sep in self.value:
                return self.value.rsplit(sep, 1)[1]
        return self.value


@dataclass(frozen=True, slots=True)
class BNode:
    """A blank node, identified by a graph-local label."""
    label: str

    def __post_init__(self):
        if not self.label:
            raise ValueError("blank node label must be nonempty")

    def __str__(self) -> str:
        return f"_:{self.label}"


@dataclass(frozen=True, slots=True)
class Literal:
    """A number or string literal."""
    value: Union[int, float, str]

    def __post_init__(self):
        if isinstance(self.value, bool):
            raise ValueError("boolean literals are not supported")
        if isinstance(self.value, float) and not math.isfinite(self.value):
            raise ValueError(f"numeric literal must be finite, got {self.value!r}")

    @property
    def is_number(self) -> bool:
        return not isinstance(self.value, str)

    def __str__(self) -> str:
        return repr(self.value) if self.is_number else f'"{self.value}"'


Term = Union[IRI, BNode, Literal]
Node = Union[IRI, BNode]


@dataclass(frozen=True, slots=True)
class Triple:
    """A subject-predicate-object statement."""
    subject: Node
    predicate: IRI
    object: Term

    def __post_init__(self):
        if isinstance(self.subject, Literal):
            raise ValueError("triple subject cannot be a literal")
        if not isinstance(self.predicate, IRI):
            raise ValueError("triple predicate must be an IRI")

    def __iter__(self):
        return iter((self.subject, self.predicate, self.object))


def viz(name: str) -> IRI:
    """IRI in the default (:) namespace."""
    return IRI(VIZ + name)


def cgml(name: str) -> IRI:
    return IRI(CGML + name)


def gml(name: str) -> IRI:
    return IRI(GML + name)


def expand_pname(pname: str) -> IRI:
    """
    Expand a prefixed name against the fixed prefix table.

    Raises:
        KeyError: If the prefix is unknown
    """
    prefix, _, local = pname.partition(":")
    return IRI(PREFIXES[prefix] + local)


def compact(iri: IRI) -> str:
    """Prefixed form when a namespace matches, otherwise <iri>."""
    for prefix, ns in PREFIXES.items():
        if iri.value.startswith(ns) and len(iri.value) > len(ns):
            return f"{prefix}:{iri.value[len(ns):]}"
    return str(iri)


def numeric(term: Term) -> float:
    """
    Numeric value of a literal term.

    Raises:
        TypeError: If the term is not a numeric literal
    """
    if isinstance(term, Literal) and term.is_number:
        return float(term.value)
    raise TypeError(f"expected a numeric literal, got {term}")


RDF_TYPE = IRI(RDF + "type")

# Data schema predicates
VALUE = viz("value")
LOCATION = viz("location")
ABOUT = viz("about")
ARG1 = viz("arg1")
ARG2 = viz("arg2")
XCOORD = viz("xcoord")
YCOORD = viz("ycoord")
ZCOORD = viz("zcoord")
POSLIST_VIZ = viz("posList")
VX = viz("vx")
VY = viz("vy")
VZ = viz("vz")
POINT = viz("Point")
REGION = viz("Region")

# Visual vocabulary predicates
RADIUS = viz("radius")
HEIGHT = viz("height")
COLOR = viz("color")
RED = viz("red")
GREEN = viz("green")
BLUE = viz("blue")
CONTENT = viz("content")
ENDPOINT = viz("endpoint")
INPUT_DATA = viz("inputData")
LEVELS = viz("levels")
SEEDS = viz("seeds")
COLOR_TYPE = viz("Color")

# CityGML vocabulary used by the geometry index
GML_POSLIST = gml("posList")

# Abstract-to-data provenance links written by the technique mapper
DERIVED_FROM = viz("derivedFrom")
