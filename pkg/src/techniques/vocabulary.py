"""
Abstract visual vocabulary.

Every visual type declares its required and optional properties and a
location mode:

- ``point``: placed at a point, a region, a city object, or through a
  spatial relation (Sphere, Cone)
- ``relation``: placed through a spatial relation only (Panel)
- ``endpoints``: two :endpoint links to city objects or points (Line)
- ``global``: built from :inputData samples (IsoSurface, FlowLines)

New types register an entry here and a concrete solver in
``src.layout.registry``.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from src.errors import VocabularyError
from src.logging import logger
from src.rdf.terms import (
    BLUE,
    COLOR,
    COLOR_TYPE,
    CONTENT,
    ENDPOINT,
    GREEN,
    HEIGHT,
    INPUT_DATA,
    IRI,
    LEVELS,
    POINT,
    RADIUS,
    RED,
    REGION,
    SEEDS,
    viz,
)

LOCATION_MODES = ("point", "relation", "endpoints", "global")

SPHERE = viz("Sphere")
CONE = viz("Cone")
LINE = viz("Line")
PANEL = viz("Panel")
ISOSURFACE = viz("IsoSurface")
FLOWLINES = viz("FlowLines")

NEAR = viz("nearRelation")
ABOVE = viz("aboveRelation")
INSIDE = viz("insideRelation")
FRONT_OF = viz("frontOfRelation")


@dataclass(frozen=True)
class VocabularyEntry:
    """Declaration of one abstract visual type."""
    type_iri: IRI
    required: Tuple[IRI, ...]
    location_mode: str
    optional: Tuple[IRI, ...] = ()
    numeric: Tuple[IRI, ...] = ()

    @property
    def is_complex(self) -> bool:
        return self.location_mode == "global"

    @property
    def name(self) -> str:
        return self.type_iri.local_name


@dataclass
class AbstractVocabulary:
    """Registry of visual types, spatial relations and auxiliary node types."""
    entries: Dict[IRI, VocabularyEntry] = field(default_factory=dict)
    relations: Dict[IRI, None] = field(default_factory=dict)
    auxiliary: Dict[IRI, Tuple[IRI, ...]] = field(default_factory=dict)

    def register(self, entry: VocabularyEntry) -> None:
        """
        Register a visual type.

        Raises:
            VocabularyError: On a missing location mode or empty required set
        """
        if entry.location_mode not in LOCATION_MODES:
            raise VocabularyError(
                f"{entry.name}: location mode must be one of {', '.join(LOCATION_MODES)}"
            )
        if not entry.required:
            raise VocabularyError(f"{entry.name}: required property set is empty")
        self.entries[entry.type_iri] = entry
        logger.debug(f"📚 Registered visual type {entry.name} ({entry.location_mode})")

    def register_relation(self, relation: IRI) -> None:
        self.relations[relation] = None

    def __contains__(self, type_iri: IRI) -> bool:
        return type_iri in self.entries

    def get(self, type_iri: IRI) -> Optional[VocabularyEntry]:
        return self.entries.get(type_iri)

    def is_known_type(self, type_iri: IRI) -> bool:
        """Visual types, relations and auxiliary types may all be constructed."""
        return type_iri in self.entries or type_iri in self.relations or type_iri in self.auxiliary

    def visual_types(self) -> List[IRI]:
        return list(self.entries)

    def complex_types(self) -> List[IRI]:
        return [t for t, e in self.entries.items() if e.is_complex]


def builtin_vocabulary() -> AbstractVocabulary:
    """Vocabulary with the built-in visual types and relations."""
    vocabulary = AbstractVocabulary()
    vocabulary.register(VocabularyEntry(SPHERE, (RADIUS,), "point", (COLOR,), numeric=(RADIUS,)))
    vocabulary.register(VocabularyEntry(CONE, (HEIGHT,), "point", (COLOR,), numeric=(HEIGHT,)))
    vocabulary.register(VocabularyEntry(LINE, (COLOR, ENDPOINT), "endpoints"))
    vocabulary.register(VocabularyEntry(PANEL, (CONTENT,), "relation", (COLOR,)))
    vocabulary.register(VocabularyEntry(ISOSURFACE, (INPUT_DATA, LEVELS), "global", (COLOR,), numeric=(LEVELS,)))
    vocabulary.register(VocabularyEntry(FLOWLINES, (INPUT_DATA, SEEDS), "global", (COLOR,)))
    for relation in (NEAR, ABOVE, INSIDE, FRONT_OF):
        vocabulary.register_relation(relation)
    vocabulary.auxiliary[COLOR_TYPE] = (RED, GREEN, BLUE)
    vocabulary.auxiliary[POINT] = ()
    vocabulary.auxiliary[REGION] = ()
    return vocabulary


_vocabulary: Optional[AbstractVocabulary] = None


def get_vocabulary() -> AbstractVocabulary:
    """Process-wide vocabulary (built-ins plus anything registered at runtime)."""
    global _vocabulary
    if _vocabulary is None:
        _vocabulary = builtin_vocabulary()
    return _vocabulary


def reset_vocabulary() -> None:
    """Drop runtime registrations (used by tests)."""
    global _vocabulary
    _vocabulary = None


__all__ = [
    "LOCATION_MODES",
    "SPHERE",
    "CONE",
    "LINE",
    "PANEL",
    "ISOSURFACE",
    "FLOWLINES",
    "NEAR",
    "ABOVE",
    "INSIDE",
    "FRONT_OF",
    "VocabularyEntry",
    "AbstractVocabulary",
    "builtin_vocabulary",
    "get_vocabulary",
    "reset_vocabulary",
]
