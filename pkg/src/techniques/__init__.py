"""Technique specifications, the abstract vocabulary and the abstract-level mapper."""

from pathlib import Path

from .vocabulary import (
    ABOVE,
    CONE,
    FLOWLINES,
    FRONT_OF,
    INSIDE,
    ISOSURFACE,
    LINE,
    NEAR,
    PANEL,
    SPHERE,
    AbstractVocabulary,
    VocabularyEntry,
    builtin_vocabulary,
    get_vocabulary,
    reset_vocabulary,
)
from .spec import DataCase, EmitHints, LayoutParams, TechniqueSpec, check_requirements, parse_technique, read_technique
from .mapper import (
    AbstractVisualGraph,
    Violation,
    apply_technique,
    classify_dataset,
    validate_abstract,
    visual_nodes,
    vocabulary_subgraph,
)

LIBRARY_DIR = Path(__file__).parent / "library"


def library_path(name: str) -> Path:
    """Path of a built-in technique file, e.g. ``library_path("cone-at-point")``."""
    return LIBRARY_DIR / f"{name}.tech"


def library_names() -> list:
    return sorted(p.stem for p in LIBRARY_DIR.glob("*.tech"))


__all__ = [
    "ABOVE",
    "CONE",
    "FLOWLINES",
    "FRONT_OF",
    "INSIDE",
    "ISOSURFACE",
    "LINE",
    "NEAR",
    "PANEL",
    "SPHERE",
    "AbstractVocabulary",
    "VocabularyEntry",
    "builtin_vocabulary",
    "get_vocabulary",
    "reset_vocabulary",
    "DataCase",
    "EmitHints",
    "LayoutParams",
    "TechniqueSpec",
    "check_requirements",
    "parse_technique",
    "read_technique",
    "AbstractVisualGraph",
    "Violation",
    "apply_technique",
    "classify_dataset",
    "validate_abstract",
    "visual_nodes",
    "vocabulary_subgraph",
    "LIBRARY_DIR",
    "library_path",
    "library_names",
]
