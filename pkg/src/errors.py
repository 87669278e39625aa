"""
Exception hierarchy for city-viz-forge.

Every exception carries the process exit status the CLI reports for it:
2 for bad input or usage, 3 for internal invariant violations.
"""

from typing import List, Optional


class CityVizError(Exception):
    """Base class for all city-viz-forge errors."""

    exit_code = 3


# ============================================================================
# Input errors (exit status 2)
# ============================================================================


class InputError(CityVizError):
    """Raised when user-supplied input cannot be processed."""

    exit_code = 2


class CityGMLError(InputError):
    """Raised for CityGML documents outside the supported subset."""


class CityGMLSyntaxError(CityGMLError):
    """Malformed XML; carries the position reported by the parser."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class UnsupportedGeometryError(CityGMLError):
    """An element outside the supported geometry subset was found."""

    def __init__(self, element: str, path: str, line: Optional[int] = None):
        self.element = element
        self.path = path
        self.line = line
        at_line = f" at line {line}" if line is not None else ""
        super().__init__(f"unsupported element {element} at {path}{at_line}")


class PosListError(CityGMLError):
    """A posList literal cannot be turned into 3D coordinates."""


class GeometryError(InputError):
    """A ring or surface violates the geometry index invariants."""


class DatasetError(InputError):
    """A tabular dataset has the wrong shape or content."""


class DictionaryError(DatasetError):
    """An external object reference cannot be resolved."""

    def __init__(self, message: str, ref: Optional[str] = None, row: Optional[int] = None):
        self.ref = ref
        self.row = row
        super().__init__(message)


class GridFieldError(DatasetError):
    """A grid field file is malformed."""


class QuerySyntaxError(InputError):
    """A query could not be parsed; carries line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")


class UnknownGraphError(InputError):
    """A query named a graph that is not in the store."""


class StoreFrozenError(CityVizError):
    """Raised when writing to a store after its load phase."""


class TechniqueError(InputError):
    """A technique specification file is malformed."""


class VocabularyError(TechniqueError):
    """A technique constructs a type the abstract vocabulary does not know."""


class MissingParameterError(TechniqueError):
    """A technique omits a layout parameter its case requires."""


class ClassificationError(InputError):
    """A dataset graph does not match exactly one data schema."""


class ConfigError(InputError):
    """A pipeline configuration file is invalid."""


class SceneFormatError(InputError):
    """A scene interchange file is malformed."""


# ============================================================================
# Evaluation and layout errors
# ============================================================================


class EvaluationError(CityVizError):
    """An expression could not be evaluated for a binding."""

    exit_code = 2


class LayoutError(CityVizError):
    """A layout solver could not place an abstract node."""

    exit_code = 2

    def __init__(self, message: str, node: Optional[str] = None):
        self.node = node
        prefix = f"{node}: " if node else ""
        super().__init__(f"{prefix}{message}")


class UnsupportedRelationError(LayoutError):
    """A spatial relation is registered but has no concrete solver."""


# ============================================================================
# Invariant violations (exit status 3)
# ============================================================================


class InvariantViolation(CityVizError):
    """An internal consistency check failed."""

    exit_code = 3


class AbstractValidationError(InvariantViolation):
    """The abstract visual graph failed validation."""

    def __init__(self, violations: List[object]):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"abstract graph has {len(self.violations)} violation(s): {lines}")
