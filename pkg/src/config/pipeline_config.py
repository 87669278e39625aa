"""
Pipeline Configuration

Flat ``key = value`` text, one setting per line, ``#`` comment lines::

    model = city.gml
    technique = cone-at-point.tech
    output = pedestrians.html
    format = x3dom
    dataset.peds.path = pedestrians.csv
    dataset.peds.kind = point
    dataset.peds.type = :PedestrianCounting
    layout.cone-base-radius = 1
    emit.color = 0 0 1

Relative paths resolve against the config file's directory. A technique
that is not an existing file may name a built-in library technique.
"""

import re
from dataclasses import replace
from pathlib import Path
from typing import Dict, List, Literal as TypingLiteral, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.errors import ConfigError, TechniqueError
from src.logging import logger
from src.rdf.terms import IRI, expand_pname

DatasetKind = TypingLiteral["point", "region", "object", "relation", "grid"]
OutputFormat = TypingLiteral["x3d", "x3dom"]

TOP_LEVEL_KEYS = ("model", "technique", "output", "format")
DATASET_FIELDS = ("path", "kind", "type", "dict", "regions", "id-prefix", "loc-prefix")

_LINE = re.compile(r"^\s*([A-Za-z0-9_.\-]+)\s*=\s*(.*?)\s*$")


def parse_type_iri(text: str) -> IRI:
    """
    Type IRI from ``<iri>``, a prefixed name (``:PedestrianCounting``) or a
    bare local name in the default namespace.

    Raises:
        ConfigError: On an unknown prefix or an empty name
    """
    text = text.strip()
    try:
        if text.startswith("<") and text.endswith(">"):
            return IRI(text[1:-1])
        if not text or text.endswith(":"):
            raise ValueError("empty name")
        return expand_pname(text if ":" in text else f":{text}")
    except KeyError:
        raise ConfigError(f"unknown prefix in type '{text}'") from None
    except ValueError as e:
        raise ConfigError(f"invalid type '{text}': {e}") from None


def default_prefixes(name: str, id_prefix: Optional[str] = None, loc_prefix: Optional[str] = None) -> Tuple[str, str]:
    """Data element and location IRI prefixes for a dataset called ``name``."""
    id_prefix = id_prefix or name
    return id_prefix, loc_prefix or f"{id_prefix}-loc"


def resolve_technique(value: Union[str, Path], base: Path) -> Path:
    """A technique file relative to ``base``, falling back to the built-in library."""
    from src.techniques import library_path

    candidate = Path(value)
    if not candidate.is_absolute():
        candidate = base / candidate
    if candidate.exists():
        return candidate
    builtin = library_path(Path(value).stem)
    return builtin if builtin.exists() and Path(value).suffix in ("", ".tech") else candidate


def split_overrides(entries: List[str]) -> Tuple[Dict[str, str], Dict[str, str]]:
    """
    Split ``layout.<key>=<value>`` / ``emit.<key>=<value>`` entries.

    Raises:
        ConfigError: On a malformed entry or an unknown section
    """
    sections: Dict[str, Dict[str, str]] = {"layout": {}, "emit": {}}
    for entry in entries:
        key, sep, value = entry.partition("=")
        section, _, name = key.strip().partition(".")
        if not sep or section not in sections or not name:
            raise ConfigError(f"bad override '{entry}' (expected layout.<key>=<value> or emit.<key>=<value>)")
        sections[section][name] = value.strip()
    return sections["layout"], sections["emit"]


def apply_overrides(spec, layout: Dict[str, str], emit: Dict[str, str]):
    """
    Technique with layout/emit overrides merged in and re-checked.

    Raises:
        ConfigError: On undocumented keys or invalid values
    """
    from src.techniques import check_requirements

    if not layout and not emit:
        return spec
    params = spec.layout.with_overrides(layout, ConfigError)
    hints = spec.emit.with_overrides(emit, ConfigError)
    try:
        check_requirements(spec.query, spec.case, params, name=spec.name)
    except TechniqueError as e:
        raise ConfigError(str(e)) from None
    return replace(spec, layout=params, emit=hints)


# ============================================================================
# Models
# ============================================================================


class _Entry(BaseModel):
    model_config = ConfigDict(
        extra="forbid",
        frozen=True,
        populate_by_name=True,
        alias_generator=lambda name: name.replace("_", "-"),
    )


class DatasetEntry(_Entry):
    """One ``dataset.<name>.*`` group."""
    name: str
    path: Path
    kind: DatasetKind
    type: str
    dictionary: Optional[Path] = Field(default=None, alias="dict")
    regions: Optional[Path] = None
    id_prefix: Optional[str] = None
    loc_prefix: Optional[str] = None

    @field_validator("type")
    @classmethod
    def _known_type(cls, value: str) -> str:
        try:
            parse_type_iri(value)
        except ConfigError as e:
            raise ValueError(str(e)) from None
        return value

    @model_validator(mode="after")
    def _side_files(self) -> "DatasetEntry":
        if self.kind in ("object", "relation") and self.dictionary is None:
            raise ValueError(f"{self.kind} data needs a dict file")
        if self.kind == "region" and self.regions is None:
            raise ValueError("region data needs a regions file")
        return self

    @property
    def type_iri(self) -> IRI:
        return parse_type_iri(self.type)

    def prefixes(self) -> Tuple[str, str]:
        return default_prefixes(self.name, self.id_prefix, self.loc_prefix)

    def paths(self) -> List[Path]:
        return [p for p in (self.path, self.dictionary, self.regions) if p is not None]


class PipelineConfig(_Entry):
    """A complete pipeline run: one model, one technique, one output."""
    model: Path
    technique: Path
    output: Path
    format: OutputFormat = "x3dom"
    datasets: List[DatasetEntry] = Field(min_length=1)
    layout: Dict[str, str] = Field(default_factory=dict)
    emit: Dict[str, str] = Field(default_factory=dict)

    def check_paths(self) -> None:
        """
        Raises:
            ConfigError: If a referenced input file does not exist
        """
        inputs = [("model", self.model), ("technique", self.technique)]
        for dataset in self.datasets:
            inputs.extend((f"dataset {dataset.name}", p) for p in dataset.paths())
        for label, path in inputs:
            if not path.is_file():
                raise ConfigError(f"{label} file not found: {path}")

    def technique_spec(self):
        """Parsed technique with the config's overrides applied."""
        from src.techniques import read_technique

        return apply_overrides(read_technique(self.technique), self.layout, self.emit)


# ============================================================================
# Parsing
# ============================================================================


def _describe(error: ValidationError) -> str:
    problems = []
    for item in error.errors():
        where = ".".join(str(p) for p in item["loc"])
        message = item["msg"].removeprefix("Value error, ")
        problems.append(f"{where}: {message}" if where else message)
    return "; ".join(problems)


def parse_pipeline_config(text: str, base_dir: Union[str, Path] = ".") -> PipelineConfig:
    """
    Parse pipeline config text.

    Raises:
        ConfigError: On malformed lines, unknown or repeated keys,
            incomplete dataset groups or invalid values
    """
    base = Path(base_dir)
    top: Dict[str, str] = {}
    groups: Dict[str, Dict[str, str]] = {}
    sections: Dict[str, Dict[str, str]] = {"layout": {}, "emit": {}}

    for number, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        match = _LINE.match(line)
        if not match:
            raise ConfigError(f"line {number}: expected 'key = value'")
        key, value = match.groups()
        head, _, rest = key.partition(".")
        if head == "dataset":
            name, _, field = rest.partition(".")
            if not name or field not in DATASET_FIELDS:
                raise ConfigError(
                    f"line {number}: bad dataset key '{key}' "
                    f"(expected dataset.<name>.<{'|'.join(DATASET_FIELDS)}>)"
                )
            target = groups.setdefault(name, {})
        elif head in sections and rest:
            target, field = sections[head], rest
        elif key in TOP_LEVEL_KEYS:
            target, field = top, key
        else:
            raise ConfigError(f"line {number}: unknown key '{key}'")
        if field in target:
            raise ConfigError(f"line {number}: duplicate key '{key}'")
        target[field] = value

    for key in ("model", "technique", "output"):
        if key not in top:
            raise ConfigError(f"missing '{key}' setting")
    if not groups:
        raise ConfigError("no dataset configured (dataset.<name>.path = ...)")

    def resolve(value: str) -> Path:
        path = Path(value)
        return path if path.is_absolute() else base / path

    datasets = []
    for name, fields in groups.items():
        for key in ("path", "dict", "regions"):
            if key in fields:
                fields[key] = resolve(fields[key])
        try:
            datasets.append(DatasetEntry.model_validate({"name": name, **fields}))
        except ValidationError as e:
            raise ConfigError(f"dataset {name}: {_describe(e)}") from None

    try:
        config = PipelineConfig(
            model=resolve(top["model"]),
            technique=resolve_technique(top["technique"], base),
            output=resolve(top["output"]),
            format=top.get("format", "x3dom").lower(),
            datasets=datasets,
            layout=sections["layout"],
            emit=sections["emit"],
        )
    except ValidationError as e:
        raise ConfigError(_describe(e)) from None
    logger.debug(f"🧾 Pipeline config: {len(config.datasets)} dataset(s), technique {config.technique.name}")
    return config


def read_pipeline_config(path: Union[str, Path]) -> PipelineConfig:
    """Read a config file; paths inside resolve against its directory."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e.strerror}") from None
    return parse_pipeline_config(text, path.parent)


__all__ = [
    "DatasetEntry",
    "PipelineConfig",
    "apply_overrides",
    "default_prefixes",
    "parse_pipeline_config",
    "parse_type_iri",
    "read_pipeline_config",
    "resolve_technique",
    "split_overrides",
]
