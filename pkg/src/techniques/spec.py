"""
Technique specification files.

    technique "cone-at-point"
    case spatial-individual
    construct { ... } where { ... }
    layout { cone-base-radius = 1; }
    emit { color = 0 0 1; }

``layout`` and ``emit`` are optional; keys are checked against
LayoutParams and EmitHints, defaults come from src.config.
"""

import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Dict, List, Literal as TypingLiteral, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from src.config import (
    BUILDING_COLOR,
    DEFAULT_ABOVE_CLEARANCE,
    DEFAULT_COLOR,
    DEFAULT_CONE_BASE_RADIUS,
    DEFAULT_LINE_WIDTH,
    DEFAULT_NEAR_DISTANCE,
    DEFAULT_PANEL_HEIGHT,
    DEFAULT_PANEL_WIDTH,
    DEFAULT_STREAMLINE_LENGTH,
    DEFAULT_STREAMLINE_STEP,
    LAYOUT_WORKERS,
)
from src.errors import MissingParameterError, QuerySyntaxError, TechniqueError, VocabularyError
from src.logging import logger
from src.rdf.query import Query, parse_query
from src.techniques.vocabulary import FLOWLINES, ISOSURFACE, AbstractVocabulary, get_vocabulary


class DataCase(str, Enum):
    """The four data/representation cases."""
    SPATIAL_INDIVIDUAL = "spatial-individual"
    SPATIAL_GLOBAL = "spatial-global"
    OBJECT_RELATED = "object-related"
    OBJECT_RELATION = "object-relation"


# ============================================================================
# Parameter models
# ============================================================================


def _hyphenate(name: str) -> str:
    return name.replace("_", "-")


def _numbers(value) -> List[float]:
    if isinstance(value, str):
        return [float(v) for v in value.replace(",", " ").split()]
    return value


class _Params(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True, alias_generator=_hyphenate, frozen=True)

    @classmethod
    def from_entries(cls, entries: Dict[str, str], error=TechniqueError):
        """Validate ``key = value`` entries; raises ``error`` on bad keys or values."""
        try:
            return cls.model_validate(entries)
        except ValidationError as e:
            raise error(_describe(cls.__name__, e)) from None

    def with_overrides(self, entries: Dict[str, str], error=TechniqueError):
        merged = self.model_dump(by_alias=True, exclude_none=True)
        merged.update(entries)
        return type(self).from_entries(merged, error)


def _describe(model: str, error: ValidationError) -> str:
    problems = []
    for item in error.errors():
        key = ".".join(str(p) for p in item["loc"]) or model
        if item["type"] == "extra_forbidden":
            problems.append(f"unknown key '{key}'")
        else:
            problems.append(f"{key}: {item['msg']}")
    return "; ".join(problems)


class LayoutParams(_Params):
    """Layout parameters; lengths in meters."""
    above_clearance: float = Field(default=DEFAULT_ABOVE_CLEARANCE, ge=0)
    near_distance: float = Field(default=DEFAULT_NEAR_DISTANCE, ge=0)
    cone_base_radius: float = Field(default=DEFAULT_CONE_BASE_RADIUS, gt=0)
    line_width: float = Field(default=DEFAULT_LINE_WIDTH, gt=0)
    panel_width: float = Field(default=DEFAULT_PANEL_WIDTH, gt=0)
    panel_height: float = Field(default=DEFAULT_PANEL_HEIGHT, gt=0)
    iso_levels: Optional[List[float]] = None
    seeds: Optional[List[Tuple[float, float, float]]] = None
    streamline_step: float = Field(default=DEFAULT_STREAMLINE_STEP, gt=0)
    streamline_length: float = Field(default=DEFAULT_STREAMLINE_LENGTH, gt=0)
    resample_origin: Optional[Tuple[float, float, float]] = None
    resample_spacing: Optional[Tuple[float, float, float]] = None
    resample_dims: Optional[Tuple[int, int, int]] = None
    region_point: TypingLiteral["centroid", "vertex-mean"] = "centroid"
    workers: int = Field(default=LAYOUT_WORKERS, ge=1)

    @field_validator("iso_levels", "resample_origin", "resample_spacing", "resample_dims", mode="before")
    @classmethod
    def _split_numbers(cls, value):
        return _numbers(value)

    @field_validator("seeds", mode="before")
    @classmethod
    def _split_seeds(cls, value):
        if isinstance(value, str):
            groups = [g for g in re.split(r"[,;]", value) if g.strip()]
            return [tuple(float(v) for v in g.split()) for g in groups]
        return value

    @field_validator("resample_spacing")
    @classmethod
    def _positive_spacing(cls, value):
        if value is not None and any(v <= 0 for v in value):
            raise ValueError("spacing must be positive")
        return value

    @field_validator("resample_dims")
    @classmethod
    def _positive_dims(cls, value):
        if value is not None and any(v < 2 for v in value):
            raise ValueError("resample dims must be at least 2 per axis")
        return value


class EmitHints(_Params):
    """Emitter hints; colors are RGB in [0, 1]."""
    color: Tuple[float, float, float] = DEFAULT_COLOR
    transparency: float = Field(default=0.0, ge=0, le=1)
    building_color: Tuple[float, float, float] = BUILDING_COLOR
    title: str = "city-viz-forge"

    @field_validator("color", "building_color", mode="before")
    @classmethod
    def _split_color(cls, value):
        return _numbers(value)

    @field_validator("color", "building_color")
    @classmethod
    def _unit_range(cls, value):
        if any(c < 0 or c > 1 for c in value):
            raise ValueError("color components must lie in [0, 1]")
        return value


# ============================================================================
# Technique spec
# ============================================================================


@dataclass(frozen=True)
class TechniqueSpec:
    """A parsed technique: case, query and parameters."""
    name: str
    case: DataCase
    query: Query
    layout: LayoutParams
    emit: EmitHints
    query_text: str = ""

    def constructs_complex(self, vocabulary: Optional[AbstractVocabulary] = None) -> bool:
        vocabulary = vocabulary or get_vocabulary()
        return any(t in vocabulary.complex_types() for t in self.query.constructed_types())


_NAME = re.compile(r'^\s*technique\s+"([^"]+)"\s*$', re.MULTILINE)
_CASE = re.compile(r"^\s*case\s+([A-Za-z-]+)\s*$", re.MULTILINE)
_SECTION = re.compile(r"\b(layout|emit)\s*\{([^{}]*)\}", re.DOTALL)
_CONSTRUCT = re.compile(r"^\s*construct\b", re.IGNORECASE | re.MULTILINE)


def _query_span(text: str) -> Tuple[int, int]:
    """Start and end offsets of the construct ... where { } block."""
    match = _CONSTRUCT.search(text)
    if not match:
        raise TechniqueError("technique has no construct query")
    depth, blocks, pos = 0, 0, match.end()
    in_string = in_iri = False
    while pos < len(text):
        ch = text[pos]
        if in_string:
            if ch == "\\":
                pos += 1
            elif ch == '"':
                in_string = False
        elif in_iri:
            if ch == ">":
                in_iri = False
        elif ch == '"':
            in_string = True
        elif ch == "<":
            in_iri = True
        elif ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                blocks += 1
                if blocks == 2:
                    return match.start(), pos + 1
        pos += 1
    raise TechniqueError("construct query is not closed (expected construct { } where { })")


def _entries(body: str, section: str) -> Dict[str, str]:
    entries: Dict[str, str] = {}
    for raw in re.split(r"[;\n]", body):
        item = raw.strip()
        if not item or item.startswith("#"):
            continue
        if "=" not in item:
            raise TechniqueError(f"{section}: expected 'key = value', got '{item}'")
        key, _, value = item.partition("=")
        key = key.strip()
        if key in entries:
            raise TechniqueError(f"{section}: duplicate key '{key}'")
        entries[key] = value.strip()
    return entries


def check_requirements(
    query: Query,
    case: DataCase,
    layout: LayoutParams,
    vocabulary: Optional[AbstractVocabulary] = None,
    name: str = "technique",
) -> None:
    """
    Vocabulary and parameter checks shared by parsing and config overrides.

    Raises:
        VocabularyError: If the query constructs an unregistered type
        MissingParameterError: If a parameter the case needs is absent
        TechniqueError: If the case and the constructed types disagree
    """
    vocabulary = vocabulary or get_vocabulary()
    types = query.constructed_types()
    for type_iri in types:
        if not vocabulary.is_known_type(type_iri):
            raise VocabularyError(f"{name}: constructs unregistered type {type_iri.local_name}")
    complex_types = [t for t in types if t in vocabulary.complex_types()]
    if case == DataCase.SPATIAL_GLOBAL and not complex_types:
        raise TechniqueError(f"{name}: case {case.value} needs a complex visual type")
    if case != DataCase.SPATIAL_GLOBAL and complex_types:
        raise TechniqueError(
            f"{name}: complex type {complex_types[0].local_name} requires case spatial-global"
        )
    if ISOSURFACE in types and not layout.iso_levels:
        raise MissingParameterError(f"{name}: IsoSurface needs layout parameter iso-levels")
    if FLOWLINES in types and not layout.seeds:
        raise MissingParameterError(f"{name}: FlowLines needs layout parameter seeds")


def parse_technique(text: str, vocabulary: Optional[AbstractVocabulary] = None) -> TechniqueSpec:
    """
    Parse a technique specification.

    Raises:
        TechniqueError: On syntax errors or unknown keys
        QuerySyntaxError: On query errors (line numbers are file lines)
        VocabularyError: If the query constructs an unregistered type
        MissingParameterError: If a parameter the case needs is absent
    """
    start, end = _query_span(text)
    query_text = text[start:end]
    outside = text[:start] + "\n" * query_text.count("\n") + text[end:]

    name_match = _NAME.search(outside)
    if not name_match:
        raise TechniqueError('technique has no name line (technique "<name>")')
    name = name_match.group(1)
    case_match = _CASE.search(outside)
    if not case_match:
        raise TechniqueError(f"{name}: missing 'case <kind>' line")
    try:
        case = DataCase(case_match.group(1))
    except ValueError:
        allowed = ", ".join(c.value for c in DataCase)
        raise TechniqueError(f"{name}: unknown case '{case_match.group(1)}' (expected one of {allowed})") from None

    sections: Dict[str, Dict[str, str]] = {}
    for match in _SECTION.finditer(outside):
        section = match.group(1)
        if section in sections:
            raise TechniqueError(f"{name}: duplicate {section} block")
        sections[section] = _entries(match.group(2), section)

    leftover = _SECTION.sub("", _CASE.sub("", _NAME.sub("", outside)))
    leftover = "\n".join(line for line in leftover.splitlines() if not line.strip().startswith("#"))
    if leftover.strip():
        raise TechniqueError(f"{name}: unexpected text '{leftover.strip()[:40]}'")

    try:
        query = parse_query(query_text)
    except QuerySyntaxError as e:
        offset = text[:start].count("\n")
        message = str(e).rsplit(" (line", 1)[0]
        raise QuerySyntaxError(f"{name}: {message}", e.line + offset, e.column) from None

    layout = LayoutParams.from_entries(sections.get("layout", {}))
    emit = EmitHints.from_entries(sections.get("emit", {}))
    check_requirements(query, case, layout, vocabulary, name)

    logger.debug(f"🧩 Parsed technique '{name}' ({case.value}, {len(query.templates)} templates)")
    return TechniqueSpec(name=name, case=case, query=query, layout=layout, emit=emit, query_text=query_text)


def read_technique(path: Union[str, Path]) -> TechniqueSpec:
    """Read and parse a technique file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise TechniqueError(f"cannot read technique {path}: {e.strerror}") from None
    return parse_technique(text)
