"""
Line-oriented triple serialization.

One triple per line, ``<s> <p> <o> .``, UTF-8 with LF endings. IRIs are
written in angle brackets, strings as JSON-escaped double-quoted text,
numbers bare (integers without a decimal point, floats via ``repr`` so they
round-trip exactly). Blank nodes get labels ``b0, b1, ...`` in order of
first appearance in the sorted output.
"""

import json
import re
from typing import Dict, List, Tuple

from src.errors import InputError
from src.rdf.graph import Graph
from src.rdf.terms import BNode, IRI, Literal, Term, Triple

_TOKEN = re.compile(
    r'\s*(?:'
    r'(?P<iri><[^>\s]*>)'
    r'|(?P<bnode>_:[^\s]+)'
    r'|(?P<string>"(?:[^"\\]|\\.)*")'
    r'|(?P<number>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)'
    r'|(?P<dot>\.)'
    r')'
)
_INTEGER = re.compile(r"[+-]?\d+\Z")


class GraphSyntaxError(InputError):
    """A serialized graph line could not be parsed."""


def _render_literal(term: Literal) -> str:
    if term.is_number:
        return str(term.value) if isinstance(term.value, int) else repr(term.value)
    return json.dumps(term.value, ensure_ascii=False)


def _sort_key(term: Term) -> Tuple[int, str]:
    # Blank nodes sort by their original label after all IRIs.
    if isinstance(term, IRI):
        return (0, term.value)
    if isinstance(term, BNode):
        return (1, term.label)
    return (2, _render_literal(term))


def serialize_graph(graph: Graph) -> str:
    """
    Deterministic line-oriented serialization.

    Args:
        graph: Graph to serialize

    Returns:
        Text with one triple per line (empty string for an empty graph)
    """
    ordered = sorted(
        graph,
        key=lambda t: (_sort_key(t.subject), _sort_key(t.predicate), _sort_key(t.object)),
    )
    labels: Dict[BNode, str] = {}

    def render(term: Term) -> str:
        if isinstance(term, IRI):
            return f"<{term.value}>"
        if isinstance(term, BNode):
            if term not in labels:
                labels[term] = f"b{len(labels)}"
            return f"_:{labels[term]}"
        return _render_literal(term)

    lines = [f"{render(t.subject)} {render(t.predicate)} {render(t.object)} ." for t in ordered]
    return "".join(line + "\n" for line in lines)


def _parse_term(kind: str, text: str) -> Term:
    if kind == "iri":
        return IRI(text[1:-1])
    if kind == "bnode":
        return BNode(text[2:])
    if kind == "string":
        return Literal(json.loads(text))
    if _INTEGER.match(text):
        return Literal(int(text))
    return Literal(float(text))


def parse_graph(text: str) -> Graph:
    """
    Parse the line-oriented serialization back into a graph.

    Blank labels are kept as written, so the result is isomorphic to the
    serialized graph.

    Raises:
        GraphSyntaxError: On a malformed line
    """
    graph = Graph()
    for number, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        terms: List[Term] = []
        pos = 0
        finished = False
        while pos < len(line):
            if line[pos:].strip() == "":
                break
            match = _TOKEN.match(line, pos)
            if not match or match.end() == pos:
                raise GraphSyntaxError(f"line {number}: cannot parse near {line[pos:pos + 20]!r}")
            pos = match.end()
            kind = match.lastgroup
            if kind == "dot":
                finished = True
                break
            terms.append(_parse_term(kind, match.group(kind)))
        if not finished or len(terms) != 3 or line[pos:].strip():
            raise GraphSyntaxError(f"line {number}: expected '<s> <p> <o> .'")
        subject, predicate, obj = terms
        try:
            graph.add(Triple(subject, predicate, obj))
        except ValueError as e:
            raise GraphSyntaxError(f"line {number}: {e}") from None
    return graph


def render_term(term: Term) -> str:
    """Single term in the serialization syntax (blank labels kept as is)."""
    if isinstance(term, IRI):
        return f"<{term.value}>"
    if isinstance(term, BNode):
        return f"_:{term.label}"
    return _render_literal(term)


def parse_term(text: str) -> Term:
    """
    Inverse of ``render_term``.

    Raises:
        GraphSyntaxError: If the text is not exactly one term
    """
    match = _TOKEN.match(text)
    if not match or match.lastgroup in (None, "dot") or text[match.end():].strip():
        raise GraphSyntaxError(f"not a term: {text!r}")
    return _parse_term(match.lastgroup, match.group(match.lastgroup))
