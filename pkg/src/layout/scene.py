"""
Concrete scene model and its JSON Lines interchange format.

File layout::

    {"format": "city-viz-forge-scene", "version": 1, "source": "<technique>"}
    {"id": "n0", "shape": {"kind": "cone", ...}, "position": [...], ...}
    ...

Sphere and panel positions are centres; a cone position is the centre of
its base. Line, polyline and mesh coordinates are world coordinates and
their nodes sit at the origin.
"""

import json
from pathlib import Path
from typing import Annotated, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.config import SCENE_FORMAT_NAME, SCENE_FORMAT_VERSION
from src.errors import SceneFormatError
from src.logging import logger

Vec3 = Tuple[float, float, float]
Rotation = Tuple[float, float, float, float]

IDENTITY_ROTATION: Rotation = (0.0, 0.0, 1.0, 0.0)


class _Record(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False, frozen=True)


# ============================================================================
# Shapes
# ============================================================================


class SphereShape(_Record):
    kind: Literal["sphere"] = "sphere"
    radius: float = Field(gt=0)


class ConeShape(_Record):
    kind: Literal["cone"] = "cone"
    height: float = Field(gt=0)
    base_radius: float = Field(gt=0)


class LineShape(_Record):
    kind: Literal["line"] = "line"
    p1: Vec3
    p2: Vec3
    width: float = Field(gt=0)


class PanelShape(_Record):
    kind: Literal["panel"] = "panel"
    width: float = Field(gt=0)
    height: float = Field(gt=0)
    content: Union[int, float, str]


class MeshShape(_Record):
    """Triangle mesh of one isosurface level; may be empty."""
    kind: Literal["mesh"] = "mesh"
    level: float
    vertices: List[Vec3] = Field(default_factory=list)
    triangles: List[Tuple[int, int, int]] = Field(default_factory=list)

    @model_validator(mode="after")
    def _indices_in_range(self):
        n = len(self.vertices)
        for tri in self.triangles:
            if any(i < 0 or i >= n for i in tri):
                raise ValueError(f"triangle {list(tri)} indexes outside {n} vertices")
            if len(set(tri)) < 3:
                raise ValueError(f"degenerate triangle {list(tri)}")
        return self


class PolylineShape(_Record):
    kind: Literal["polyline"] = "polyline"
    points: List[Vec3] = Field(min_length=1)
    width: float = Field(gt=0)


Shape = Annotated[
    Union[SphereShape, ConeShape, LineShape, PanelShape, MeshShape, PolylineShape],
    Field(discriminator="kind"),
]


class Material(_Record):
    color: Vec3
    transparency: float = Field(default=0.0, ge=0, le=1)

    @field_validator("color")
    @classmethod
    def _unit_rgb(cls, value):
        if any(c < 0 or c > 1 for c in value):
            raise ValueError("color components must lie in [0, 1]")
        return value


# ============================================================================
# Provenance
# ============================================================================


class LocationRef(_Record):
    """
    Summary of an abstract location or endpoint node.

    Terms are kept in the graph serialization syntax.
    """
    kind: Literal["point", "region", "relation", "object"]
    node: str
    types: List[str] = Field(default_factory=list)
    coords: Optional[Vec3] = None
    poslist: Optional[str] = None
    arg1: Optional[str] = None
    arg2: Optional[str] = None


class SampleRef(_Record):
    node: str
    value: float
    vector: Optional[Vec3] = None
    location: LocationRef


class Provenance(_Record):
    """
    Link from a scene node back to the abstract node it realizes.

    A global node realized by several scene nodes numbers them with
    ``part``; its samples are stored on part 0 only.
    """
    node: str = Field(min_length=1)
    type: str = Field(min_length=1)
    part: int = Field(default=0, ge=0)
    parts: int = Field(default=1, ge=1)
    color_node: Optional[str] = None
    location: Optional[LocationRef] = None
    endpoints: List[LocationRef] = Field(default_factory=list)
    samples: List[SampleRef] = Field(default_factory=list)
    seeds: Optional[str] = None
    sources: List[str] = Field(default_factory=list)


class SceneNode(_Record):
    id: str = ""
    shape: Shape
    position: Vec3 = (0.0, 0.0, 0.0)
    orientation: Rotation = IDENTITY_ROTATION
    material: Material
    provenance: Provenance


class ConcreteScene(_Record):
    source: str = ""
    nodes: List[SceneNode] = Field(default_factory=list)

    def __len__(self) -> int:
        return len(self.nodes)

    def abstract_nodes(self) -> List[str]:
        """Distinct abstract node ids in scene order."""
        return list(dict.fromkeys(n.provenance.node for n in self.nodes))


# ============================================================================
# Interchange format
# ============================================================================


def dump_scene(scene: ConcreteScene) -> str:
    """Serialize a scene as JSON Lines (header, then one node per line)."""
    header = {"format": SCENE_FORMAT_NAME, "version": SCENE_FORMAT_VERSION, "source": scene.source}
    lines = [json.dumps(header, sort_keys=True)]
    for node in scene.nodes:
        lines.append(json.dumps(node.model_dump(mode="json"), sort_keys=True, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def load_scene(text: str) -> ConcreteScene:
    """
    Parse a scene file.

    Raises:
        SceneFormatError: On a bad header, an unsupported version or an
            invalid node record (the message names the line)
    """
    lines = [(n, line) for n, line in enumerate(text.splitlines(), 1) if line.strip()]
    if not lines:
        raise SceneFormatError("empty scene file")
    try:
        header = json.loads(lines[0][1])
    except json.JSONDecodeError as e:
        raise SceneFormatError(f"line 1: header is not JSON ({e.msg})") from None
    if not isinstance(header, dict) or header.get("format") != SCENE_FORMAT_NAME:
        raise SceneFormatError(f"line 1: not a {SCENE_FORMAT_NAME} file")
    if header.get("version") != SCENE_FORMAT_VERSION:
        raise SceneFormatError(f"line 1: unsupported scene version {header.get('version')!r}")

    nodes = []
    for number, line in lines[1:]:
        try:
            nodes.append(SceneNode.model_validate_json(line))
        except ValidationError as e:
            first = e.errors()[0]
            where = ".".join(str(p) for p in first["loc"])
            raise SceneFormatError(f"line {number}: {where}: {first['msg']}") from None
    try:
        return ConcreteScene(source=str(header.get("source", "")), nodes=nodes)
    except ValidationError as e:
        raise SceneFormatError(str(e)) from None


def write_scene(scene: ConcreteScene, path) -> None:
    Path(path).write_text(dump_scene(scene), encoding="utf-8")
    logger.debug(f"💾 Wrote {len(scene)} scene node(s) to {path}")


def read_scene(path) -> ConcreteScene:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise SceneFormatError(f"cannot read scene {path}: {e.strerror}") from None
    return load_scene(text)


__all__ = [
    "IDENTITY_ROTATION",
    "SphereShape",
    "ConeShape",
    "LineShape",
    "PanelShape",
    "MeshShape",
    "PolylineShape",
    "Shape",
    "Material",
    "LocationRef",
    "SampleRef",
    "Provenance",
    "SceneNode",
    "ConcreteScene",
    "dump_scene",
    "load_scene",
    "write_scene",
    "read_scene",
]
