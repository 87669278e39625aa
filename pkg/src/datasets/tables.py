"""
Comma-separated dataset tables with a mandatory header row.
"""

import csv
import io
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Sequence, Union

from src.errors import DatasetError
from src.rdf.terms import Literal

_INT = re.compile(r"[+-]?\d+\Z")


@dataclass
class Table:
    """Header plus rows; ``rows[i]`` is data row ``i + 1``."""
    columns: List[str]
    rows: List[Dict[str, str]] = field(default_factory=list)
    name: str = "table"

    def __len__(self) -> int:
        return len(self.rows)

    def cell(self, row: int, column: str) -> str:
        return self.rows[row][column]

    def number(self, row: int, column: str) -> float:
        """Numeric cell; raises DatasetError naming the row and column."""
        text = self.rows[row][column].strip()
        try:
            value = float(text)
        except ValueError:
            raise DatasetError(
                f"{self.name}: row {row + 1}, column '{column}': not a number: {text!r}"
            ) from None
        if value != value or value in (float("inf"), float("-inf")):
            raise DatasetError(f"{self.name}: row {row + 1}, column '{column}': not finite")
        return value


def parse_table(text: str, required: Sequence[str] = (), name: str = "table") -> Table:
    """
    Parse CSV text.

    Args:
        text: CSV content, first line is the header
        required: Columns that must be present
        name: Label used in error messages

    Raises:
        DatasetError: On a missing header, missing columns or ragged rows
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        if required:
            raise DatasetError(f"{name}: missing header row") from None
        return Table(columns=[], name=name)
    columns = [c.strip() for c in header]
    missing = [c for c in required if c not in columns]
    if missing:
        raise DatasetError(f"{name}: missing column(s) {', '.join(missing)}")

    table = Table(columns=columns, name=name)
    for number, record in enumerate(reader, 1):
        if not record or all(not cell.strip() for cell in record):
            continue
        if len(record) != len(columns):
            raise DatasetError(
                f"{name}: row {number} has {len(record)} cells, expected {len(columns)}"
            )
        table.rows.append({c: cell.strip() for c, cell in zip(columns, record)})
    return table


def read_table(path: Union[str, Path], required: Sequence[str] = ()) -> Table:
    """Read a CSV file (UTF-8)."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise DatasetError(f"cannot read {path}: {e.strerror}") from None
    return parse_table(text, required, name=path.name)


def value_literal(text: str) -> Literal:
    """
    Literal for a value cell: integer, decimal, or the text itself.

    The datatype carries the level of measurement, so a numeric-looking
    cell becomes a number.
    """
    stripped = text.strip()
    if _INT.match(stripped):
        return Literal(int(stripped))
    try:
        value = float(stripped)
    except ValueError:
        return Literal(text)
    if value != value or value in (float("inf"), float("-inf")):
        return Literal(text)
    return Literal(value)
