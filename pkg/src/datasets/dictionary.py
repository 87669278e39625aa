"""
Reference dictionary: external object references to city model nodes.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional

from src.errors import DictionaryError
from src.datasets.tables import Table
from src.rdf.graph import Graph
from src.rdf.terms import IRI, viz


@dataclass
class Dictionary:
    """Maps dataset references (e.g. "bldg-7") to gml:id-derived IRIs."""
    entries: Dict[str, IRI] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, ref: str) -> bool:
        return ref in self.entries

    def resolve(self, ref: str, row: Optional[int] = None, model: Optional[Graph] = None) -> IRI:
        """
        Resolve a reference, optionally checking it exists in the model graph.

        Raises:
            DictionaryError: Naming the reference (and row) on failure
        """
        at_row = f" (row {row})" if row is not None else ""
        try:
            iri = self.entries[ref]
        except KeyError:
            raise DictionaryError(f"unresolvable reference '{ref}'{at_row}", ref, row) from None
        if model is not None and not model.has_subject(iri):
            raise DictionaryError(
                f"reference '{ref}'{at_row} maps to {iri.local_name}, which is not in the city model",
                ref,
                row,
            )
        return iri


def load_dictionary(table: Table) -> Dictionary:
    """
    Build a dictionary from a ``ref,gml_id`` table.

    Raises:
        DictionaryError: On a duplicate ref or missing columns
    """
    missing = [c for c in ("ref", "gml_id") if c not in table.columns and table.rows]
    if missing:
        raise DictionaryError(f"dictionary is missing column(s) {', '.join(missing)}")
    dictionary = Dictionary()
    for number, row in enumerate(table.rows, 1):
        ref = row["ref"]
        if ref in dictionary.entries:
            raise DictionaryError(f"duplicate reference '{ref}' (row {number})", ref, number)
        gml_id = row["gml_id"]
        if not gml_id:
            raise DictionaryError(f"empty gml_id for reference '{ref}' (row {number})", ref, number)
        dictionary.entries[ref] = viz(gml_id)
    return dictionary
