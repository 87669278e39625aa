"""
X3D and X3DOM emitters.

The world stays Z-up. Y-up primitives (cones, panel contents) get a
per-object rotation of 90 degrees about X; a cone's transform sits at its
centre, half its height above its base.
"""

import math
from typing import Iterable, List, Optional, Sequence, Tuple

from lxml import etree

from src.citymodel.geometry_index import GeometryIndex
from src.config import X3DOM_CSS_URL, X3DOM_SCRIPT_URL
from src.emit.base import EmittedDocument, SceneEmitter
from src.errors import ConfigError, InvariantViolation
from src.layout.scene import (
    ConcreteScene,
    ConeShape,
    LineShape,
    Material,
    MeshShape,
    PanelShape,
    PolylineShape,
    SceneNode,
    SphereShape,
)
from src.rdf.serialization import render_term
from src.techniques.spec import EmitHints
from src.utils.numbers import format_angle, format_number, format_vector

UP_ROTATION = (1.0, 0.0, 0.0, math.pi / 2)
TEXT_COLOR = (0.0, 0.0, 0.0)
TEXT_OFFSET = 0.01


def format_rotation(rotation: Sequence[float]) -> str:
    return f"{format_vector(rotation[:3])} {format_angle(rotation[3])}"


def _points(points: Iterable[Sequence[float]]) -> str:
    return " ".join(format_vector(p) for p in points)


class _Builder:
    """Appends X3D elements, lowercasing names for HTML embedding."""

    def __init__(self, lowercase: bool):
        self.lowercase = lowercase

    def name(self, text: str) -> str:
        return text.lower() if self.lowercase else text

    def element(self, parent, tag: str, attributes: List[Tuple[str, str]] = ()) -> etree._Element:
        tag = self.name(tag)
        child = etree.Element(tag) if parent is None else etree.SubElement(parent, tag)
        for key, value in attributes:
            child.set(self.name(key) if not key.startswith("data-") else key, value)
        return child

    def appearance(self, shape, material: Material, lines: bool = False) -> None:
        appearance = self.element(shape, "Appearance")
        attributes = [("diffuseColor", format_vector(material.color))]
        if lines:
            attributes.append(("emissiveColor", format_vector(material.color)))
        if material.transparency > 0:
            attributes.append(("transparency", format_number(material.transparency)))
        self.element(appearance, "Material", attributes)

    def shape(self, parent, node: SceneNode, lines: bool = False, material: Optional[Material] = None):
        # the panel text shape passes its own material and carries no node id
        attributes = [("data-prov", node.provenance.node)]
        if material is None:
            attributes.append(("data-node", node.id))
        shape = self.element(parent, "Shape", attributes)
        self.appearance(shape, material or node.material, lines)
        return shape

    # ------------------------------------------------------------------
    # Scene nodes
    # ------------------------------------------------------------------

    def node(self, parent, node: SceneNode) -> None:
        shape = node.shape
        if isinstance(shape, SphereShape):
            transform = self.element(parent, "Transform", [
                ("translation", format_vector(node.position)),
            ])
            self.element(self.shape(transform, node), "Sphere", [("radius", format_number(shape.radius))])
        elif isinstance(shape, ConeShape):
            x, y, z = node.position
            transform = self.element(parent, "Transform", [
                ("rotation", format_rotation(UP_ROTATION)),
                ("translation", format_vector((x, y, z + shape.height / 2))),
            ])
            attributes = [("height", format_number(shape.height))]
            if shape.base_radius != 1:
                attributes.append(("bottomRadius", format_number(shape.base_radius)))
            self.element(self.shape(transform, node), "Cone", attributes)
        elif isinstance(shape, PanelShape):
            self.panel(parent, node, shape)
        elif isinstance(shape, LineShape):
            transform = self.element(parent, "Transform")
            self.polyline(self.shape(transform, node, lines=True), [shape.p1, shape.p2])
        elif isinstance(shape, PolylineShape):
            transform = self.element(parent, "Transform")
            self.polyline(self.shape(transform, node, lines=True), shape.points)
        elif isinstance(shape, MeshShape):
            transform = self.element(parent, "Transform")
            tris = self.element(self.shape(transform, node), "IndexedTriangleSet", [
                ("solid", "false"), ("index", " ".join(str(i) for t in shape.triangles for i in t)),
            ])
            self.element(tris, "Coordinate", [("point", _points(shape.vertices))])
        else:
            raise InvariantViolation(f"scene node {node.id} has an unknown shape")

    def polyline(self, shape_element, points: Sequence[Sequence[float]]) -> None:
        if len(points) < 2:
            geometry = self.element(shape_element, "PointSet")
        else:
            geometry = self.element(shape_element, "LineSet", [("vertexCount", str(len(points)))])
        self.element(geometry, "Coordinate", [("point", _points(points))])

    def panel(self, parent, node: SceneNode, shape: PanelShape) -> None:
        attributes = []
        if node.orientation[3] != 0:
            attributes.append(("rotation", format_rotation(node.orientation)))
        attributes.append(("translation", format_vector(node.position)))
        outer = self.element(parent, "Transform", attributes)
        upright = self.element(outer, "Transform", [("rotation", format_rotation(UP_ROTATION))])

        w, h = shape.width / 2, shape.height / 2
        board = self.element(self.shape(upright, node), "IndexedFaceSet", [
            ("solid", "false"), ("coordIndex", "0 1 2 3 -1"),
        ])
        self.element(board, "Coordinate", [("point", _points([(-w, -h, 0), (w, -h, 0), (w, h, 0), (-w, h, 0)]))])

        content = shape.content if isinstance(shape.content, str) else format_number(shape.content)
        lifted = self.element(upright, "Transform", [("translation", format_vector((0, 0, TEXT_OFFSET)))])
        text_shape = self.shape(lifted, node, material=Material(color=TEXT_COLOR))
        text = self.element(text_shape, "Text", [("string", '"' + content.replace('"', '\\"') + '"')])
        self.element(text, "FontStyle", [
            ("size", format_number(min(shape.height / 2, 1.0))), ("justify", '"MIDDLE" "MIDDLE"'),
        ])

    # ------------------------------------------------------------------
    # City model
    # ------------------------------------------------------------------

    def buildings(self, parent, index: GeometryIndex, color) -> None:
        for entry in sorted(index, key=lambda e: render_term(e.node)):
            if not entry.surfaces:
                continue
            points, faces, offset = [], [], 0
            for surface in entry.surfaces:
                ring = surface.exterior
                points.extend(ring)
                faces.append(" ".join(str(offset + i) for i in range(len(ring))) + " -1")
                offset += len(ring)
            transform = self.element(parent, "Transform", [("DEF", f"building-{entry.name}")])
            shape = self.element(
                transform, "Shape", [("data-prov", render_term(entry.node)), ("data-building", entry.name)]
            )
            self.appearance(shape, Material(color=color))
            faceset = self.element(shape, "IndexedFaceSet", [("solid", "false"), ("coordIndex", " ".join(faces))])
            self.element(faceset, "Coordinate", [("point", _points(points))])


def build_scene_element(
    scene: ConcreteScene,
    index: Optional[GeometryIndex],
    options: EmitHints,
    lowercase: bool,
) -> etree._Element:
    """The <Scene> subtree: buildings first, then scene nodes in scene order."""
    builder = _Builder(lowercase)
    root = builder.element(None, "Scene")
    if index is not None:
        builder.buildings(root, index, options.building_color)
    seen = set()
    for node in scene.nodes:
        if node.id in seen:
            raise InvariantViolation(f"duplicate scene node id {node.id}")
        seen.add(node.id)
        builder.node(root, node)
    return root


class X3DEmitter(SceneEmitter):
    """Standalone X3D XML document."""

    kind = "x3d-xml"
    suffix = ".x3d"
    lowercase = False

    def wrap(self, scene_element, options: EmitHints) -> str:
        root = etree.Element("X3D", profile="Immersive", version="3.3")
        head = etree.SubElement(root, "head")
        etree.SubElement(head, "meta", name="title", content=options.title)
        root.append(scene_element)
        data = etree.tostring(
            root,
            xml_declaration=True,
            encoding="UTF-8",
            pretty_print=True,
            doctype='<!DOCTYPE X3D PUBLIC "ISO//Web3D//DTD X3D 3.3//EN" '
                    '"http://www.web3d.org/specifications/x3d-3.3.dtd">',
        )
        return data.decode("utf-8")


class X3DOMEmitter(SceneEmitter):
    """HTML page embedding the scene for the X3DOM runtime."""

    kind = "x3dom-html"
    suffix = ".html"
    lowercase = True

    def wrap(self, scene_element, options: EmitHints) -> str:
        html = etree.Element("html")
        head = etree.SubElement(html, "head")
        etree.SubElement(head, "meta", charset="utf-8")
        etree.SubElement(head, "title").text = options.title
        etree.SubElement(head, "script", type="text/javascript", src=X3DOM_SCRIPT_URL)
        etree.SubElement(head, "link", rel="stylesheet", type="text/css", href=X3DOM_CSS_URL)
        body = etree.SubElement(html, "body")
        x3d = etree.SubElement(body, "x3d", width="800px", height="600px")
        x3d.append(scene_element)
        text = etree.tostring(html, method="html", encoding="unicode", doctype="<!DOCTYPE html>")
        return text + "\n"


EMITTERS = {
    "x3d": X3DEmitter,
    "x3dom": X3DOMEmitter,
}


def get_emitter(name: str) -> SceneEmitter:
    """
    Emitter for an output format name.

    Raises:
        ConfigError: If the format is unknown
    """
    try:
        return EMITTERS[name.lower()]()
    except KeyError:
        raise ConfigError(f"unknown output format '{name}' (expected one of {', '.join(EMITTERS)})") from None


def emit_x3d(scene: ConcreteScene, index: Optional[GeometryIndex] = None,
             options: Optional[EmitHints] = None) -> EmittedDocument:
    """Standalone X3D XML document."""
    return X3DEmitter().emit(scene, index, options)


def emit_x3dom(scene: ConcreteScene, index: Optional[GeometryIndex] = None,
               options: Optional[EmitHints] = None) -> EmittedDocument:
    """X3DOM HTML page."""
    return X3DOMEmitter().emit(scene, index, options)


__all__ = [
    "UP_ROTATION",
    "format_rotation",
    "build_scene_element",
    "X3DEmitter",
    "X3DOMEmitter",
    "EMITTERS",
    "get_emitter",
    "emit_x3d",
    "emit_x3dom",
]
