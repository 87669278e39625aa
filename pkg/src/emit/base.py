"""
Base Scene Emitter Interface

Every output format implements SceneEmitter. The scene subtree is built
once, in X3D element and attribute spelling; emitters decide the casing
and the document shell around it.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from lxml import etree

from src.citymodel.geometry_index import GeometryIndex
from src.layout.scene import ConcreteScene
from src.logging import logger
from src.techniques.spec import EmitHints


@dataclass(frozen=True)
class EmittedDocument:
    """A generated document."""
    kind: str  # "x3d-xml" or "x3dom-html"
    text: str

    def write(self, path) -> None:
        Path(path).write_text(self.text, encoding="utf-8")
        logger.debug(f"💾 Wrote {self.kind} document to {path}")


class SceneEmitter(ABC):
    """
    Abstract base class for scene emitters.
    """

    @property
    @abstractmethod
    def kind(self) -> str:
        """Document kind reported in EmittedDocument.kind."""
        pass

    @property
    @abstractmethod
    def suffix(self) -> str:
        """File suffix for written documents (e.g. '.x3d')."""
        pass

    @property
    @abstractmethod
    def lowercase(self) -> bool:
        """Whether element and attribute names are lowercased (HTML embedding)."""
        pass

    @abstractmethod
    def wrap(self, scene_element: etree._Element, options: EmitHints) -> str:
        """
        Put the scene subtree into a complete document.

        Args:
            scene_element: The <Scene> element with all content
            options: Emit hints (title, colors)

        Returns:
            Serialized document text
        """
        pass

    def emit(
        self,
        scene: ConcreteScene,
        index: Optional[GeometryIndex] = None,
        options: Optional[EmitHints] = None,
    ) -> EmittedDocument:
        """
        Emit a scene plus the city model geometry.

        Args:
            scene: Concrete scene
            index: Geometry index; buildings are emitted when given
            options: Emit hints; defaults from settings

        Returns:
            EmittedDocument
        """
        # deferred: x3d imports this module
        from src.emit.x3d import build_scene_element

        options = options or EmitHints()
        element = build_scene_element(scene, index, options, self.lowercase)
        text = self.wrap(element, options)
        buildings = len(index) if index is not None else 0
        logger.info(f"🖼️ Emitted {self.kind}: {len(scene)} scene node(s), {buildings} building(s)")
        return EmittedDocument(kind=self.kind, text=text)


__all__ = ["EmittedDocument", "SceneEmitter"]
