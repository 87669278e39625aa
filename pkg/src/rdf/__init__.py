"""RDF terms, graphs, the named-graph store and the construct query engine."""

from .terms import (
    IRI,
    BNode,
    Literal,
    Triple,
    Term,
    VIZ,
    CGML,
    GML,
    RDF,
    PREFIXES,
    RDF_TYPE,
    viz,
    cgml,
    gml,
    compact,
    expand_pname,
    numeric,
)
from .graph import Graph, Store
from .serialization import serialize_graph, parse_graph, render_term, parse_term, GraphSyntaxError
from .isomorphism import isomorphic
from .query import Query, Variable, TriplePattern, TemplateTriple, parse_query
from .evaluator import (
    Binding,
    ConstructResult,
    ConstructWarning,
    match_bgp,
    match_graph,
    eval_expression,
    eval_construct,
    eval_construct_traced,
)

__all__ = [
    "IRI",
    "BNode",
    "Literal",
    "Triple",
    "Term",
    "VIZ",
    "CGML",
    "GML",
    "RDF",
    "PREFIXES",
    "RDF_TYPE",
    "viz",
    "cgml",
    "gml",
    "compact",
    "expand_pname",
    "numeric",
    "Graph",
    "Store",
    "serialize_graph",
    "parse_graph",
    "render_term",
    "parse_term",
    "GraphSyntaxError",
    "isomorphic",
    "Query",
    "Variable",
    "TriplePattern",
    "TemplateTriple",
    "parse_query",
    "Binding",
    "ConstructResult",
    "ConstructWarning",
    "match_bgp",
    "match_graph",
    "eval_expression",
    "eval_construct",
    "eval_construct_traced",
]
