"""Scene emitters (X3D, X3DOM) and the abstract-view reconstruction."""

from .base import EmittedDocument, SceneEmitter
from .x3d import EMITTERS, X3DEmitter, X3DOMEmitter, emit_x3d, emit_x3dom, format_rotation, get_emitter
from .reconstruct import reconstruct_abstract

__all__ = [
    "EmittedDocument",
    "SceneEmitter",
    "EMITTERS",
    "X3DEmitter",
    "X3DOMEmitter",
    "emit_x3d",
    "emit_x3dom",
    "format_rotation",
    "get_emitter",
    "reconstruct_abstract",
]
