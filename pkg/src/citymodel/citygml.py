"""
CityGML to RDF conversion.

CityGML alternates class and property elements: the root CityModel is a
class, its children are properties, their children are classes again, and
so on. Class elements become typed nodes (IRIs from gml:id, otherwise blank
nodes), property elements become exactly one triple each.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Union

from lxml import etree

from src.errors import CityGMLError, CityGMLSyntaxError, PosListError, UnsupportedGeometryError
from src.logging import logger
from src.rdf.graph import Graph
from src.rdf.terms import BNode, CGML, GML, IRI, Literal, Node, RDF_TYPE, Triple, VIZ

CITYGML_NS_PREFIX = "http://www.opengis.net/citygml"
GML_NS_PREFIX = "http://www.opengis.net/gml"
XLINK_HREF = "{http://www.w3.org/1999/xlink}href"
GML_ID_ATTRS = ("{http://www.opengis.net/gml}id", "{http://www.opengis.net/gml/3.2}id")

# Supported GML subset: class elements and property elements
GML_CLASSES = {"MultiSurface", "CompositeSurface", "Solid", "Polygon", "LinearRing", "Envelope"}
GML_PROPERTIES = {
    "surfaceMember", "exterior", "posList", "name", "description",
    "boundedBy", "lowerCorner", "upperCorner",
}

# Supported CityGML class elements (buildings and their boundary surfaces)
CITYGML_CLASSES = {
    "CityModel", "Building", "BuildingPart",
    "GroundSurface", "RoofSurface", "WallSurface", "ClosureSurface",
    "Window", "Door",
}


@dataclass
class CityModelGraph:
    """RDF graph of a CityGML document plus the gml:id table."""
    graph: Graph
    source_name: str = "model"
    ids: Dict[str, IRI] = field(default_factory=dict)
    class_count: int = 0
    property_count: int = 0

    def __len__(self) -> int:
        return len(self.graph)


def _split_tag(tag: str):
    if tag.startswith("{"):
        ns, _, local = tag[1:].partition("}")
        return ns, local
    return "", tag


def element_iri(tag: str) -> IRI:
    """IRI for an element QName under the fixed namespace table."""
    ns, local = _split_tag(tag)
    if not ns or ns.startswith(CITYGML_NS_PREFIX):
        return IRI(CGML + local)
    if ns.startswith(GML_NS_PREFIX):
        return IRI(GML + local)
    sep = "" if ns.endswith(("#", "/")) else "#"
    return IRI(f"{ns}{sep}{local}")


def _literal(text: str) -> Literal:
    text = text.strip()
    try:
        return Literal(int(text))
    except ValueError:
        pass
    try:
        value = float(text)
    except ValueError:
        return Literal(text)
    if value != value or value in (float("inf"), float("-inf")):
        return Literal(text)
    return Literal(value)


class _Converter:
    def __init__(self):
        self.graph = Graph()
        self.ids: Dict[str, IRI] = {}
        self.blank_counter = 0
        self.class_count = 0
        self.property_count = 0

    def path_of(self, element) -> str:
        parts = []
        node = element
        while node is not None:
            prefix = node.prefix
            _, local = _split_tag(node.tag)
            parts.append(f"{prefix}:{local}" if prefix else local)
            node = node.getparent()
        return "/" + "/".join(reversed(parts))

    def check_supported(self, element, is_class: bool) -> None:
        ns, local = _split_tag(element.tag)
        if ns.startswith(GML_NS_PREFIX):
            allowed = GML_CLASSES if is_class else GML_PROPERTIES
        elif not ns or ns.startswith(CITYGML_NS_PREFIX):
            if not is_class:
                return
            allowed = CITYGML_CLASSES
        else:
            return
        if local not in allowed:
            raise UnsupportedGeometryError(local, self.path_of(element), element.sourceline)

    def node_for(self, element) -> Node:
        gml_id = next((element.get(a) for a in GML_ID_ATTRS if element.get(a) is not None), None)
        if gml_id is None:
            self.blank_counter += 1
            return BNode(f"n{self.blank_counter}")
        if not gml_id:
            raise CityGMLError(f"empty gml:id at {self.path_of(element)}")
        if gml_id in self.ids:
            raise CityGMLError(f"duplicate gml:id '{gml_id}' at {self.path_of(element)}")
        iri = IRI(VIZ + gml_id)
        self.ids[gml_id] = iri
        return iri

    def visit_class(self, element) -> Node:
        self.check_supported(element, is_class=True)
        node = self.node_for(element)
        self.graph.add(Triple(node, RDF_TYPE, element_iri(element.tag)))
        self.class_count += 1
        for child in element:
            if isinstance(child.tag, str):
                self.visit_property(node, child)
        return node

    def visit_property(self, subject: Node, element) -> None:
        self.check_supported(element, is_class=False)
        predicate = element_iri(element.tag)
        self.property_count += 1
        children = [c for c in element if isinstance(c.tag, str)]
        if len(children) > 1:
            raise CityGMLError(
                f"property element holds {len(children)} class elements at {self.path_of(element)}"
            )
        if children:
            obj = self.visit_class(children[0])
        elif element.get(XLINK_HREF):
            href = element.get(XLINK_HREF)
            obj = IRI(VIZ + href[1:]) if href.startswith("#") else IRI(href)
        elif predicate.value == GML + "posList":
            text = " ".join((element.text or "").split())
            count = len(text.split()) if text else 0
            if count % 3:
                raise PosListError(
                    f"posList has {count} values, not a multiple of 3, at {self.path_of(element)}"
                    f" (line {element.sourceline})"
                )
            obj = Literal(text)
        else:
            obj = _literal(element.text or "")
        self.graph.add(Triple(subject, predicate, obj))


def parse_citygml(xml_text: Union[str, bytes], source_name: str = "model") -> CityModelGraph:
    """
    Convert a CityGML document into an RDF graph.

    Args:
        xml_text: Document text
        source_name: Name recorded on the result (used as the store graph name)

    Returns:
        CityModelGraph with one type triple per class element and one
        triple per property element

    Raises:
        CityGMLSyntaxError: If the document is not well-formed XML
        UnsupportedGeometryError: For elements outside the supported subset
        PosListError: If a posList length is not a multiple of 3
        CityGMLError: If the root is not a CityModel or gml:ids repeat
    """
    data = xml_text.encode("utf-8") if isinstance(xml_text, str) else xml_text
    parser = etree.XMLParser(remove_comments=True, remove_pis=True, resolve_entities=False, no_network=True)
    try:
        root = etree.fromstring(data, parser)
    except etree.XMLSyntaxError as e:
        line, column = e.position if e.position else (e.lineno, None)
        raise CityGMLSyntaxError(f"malformed XML: {e.msg}", line, column) from None

    ns, local = _split_tag(root.tag)
    if local != "CityModel" or (ns and not ns.startswith(CITYGML_NS_PREFIX)):
        raise CityGMLError(f"root element must be CityModel, found {local}")

    converter = _Converter()
    converter.visit_class(root)
    model = CityModelGraph(
        graph=converter.graph,
        source_name=source_name,
        ids=converter.ids,
        class_count=converter.class_count,
        property_count=converter.property_count,
    )
    logger.info(
        f"🏙️ Converted CityGML '{source_name}': {model.class_count} classes, "
        f"{model.property_count} properties, {len(model.graph)} triples"
    )
    return model


def read_citygml(path, source_name: Optional[str] = None) -> CityModelGraph:
    """Read and convert a CityGML file."""
    with open(path, "rb") as handle:
        data = handle.read()
    return parse_citygml(data, source_name or "model")
