"""
Basic graph pattern matching and construct evaluation.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from src.errors import EvaluationError
from src.logging import logger
from src.rdf.graph import Graph, Store
from src.rdf.query import (
    BinOp,
    Call,
    Const,
    Expression,
    Query,
    TemplateTriple,
    TriplePattern,
    Var,
    Variable,
)
from src.rdf.terms import BNode, IRI, Literal, Term, Triple
from src.utils.numbers import format_number

Binding = Dict[str, Term]

# Pattern blank labels are matched as variables under this reserved prefix
# and projected out of the returned bindings.
_HIDDEN = "_:"


@dataclass
class ConstructWarning:
    """
    A template instantiation that was skipped, or a whole binding dropped
    after validation (``template`` is None then).
    """
    binding_index: int
    template: Optional[TemplateTriple]
    message: str

    def __str__(self) -> str:
        return f"binding {self.binding_index}: {self.message}"


@dataclass
class ConstructInstance:
    """The triples produced for one binding."""
    binding: Binding
    blanks: Dict[str, BNode]
    triples: List[Triple] = field(default_factory=list)


@dataclass
class ConstructResult:
    graph: Graph
    warnings: List[ConstructWarning] = field(default_factory=list)
    instances: List[ConstructInstance] = field(default_factory=list)


# ============================================================================
# Pattern matching
# ============================================================================


def _slot(term, binding: Binding):
    """Resolve a pattern position: (bound value or None, variable name or None)."""
    if isinstance(term, Variable):
        name = term.name
    elif isinstance(term, BNode):
        name = _HIDDEN + term.label
    else:
        return term, None
    return binding.get(name), name


def _extend(binding: Binding, names, values) -> Optional[Binding]:
    extended = dict(binding)
    for name, value in zip(names, values):
        if name is None:
            continue
        if name in extended and extended[name] != value:
            return None
        extended[name] = value
    return extended


def match_graph(graph: Graph, pattern: Sequence[TriplePattern]) -> List[Binding]:
    """Match a pattern against a single graph (left-to-right joins)."""
    bindings: List[Binding] = [{}]
    for tp in pattern:
        next_bindings: List[Binding] = []
        for binding in bindings:
            (s, s_var), (p, p_var), (o, o_var) = (
                _slot(tp.subject, binding),
                _slot(tp.predicate, binding),
                _slot(tp.object, binding),
            )
            for triple in graph.triples(s, p, o):
                extended = _extend(binding, (s_var, p_var, o_var), tuple(triple))
                if extended is not None:
                    next_bindings.append(extended)
        bindings = next_bindings
        if not bindings:
            break
    return [{k: v for k, v in b.items() if not k.startswith(_HIDDEN)} for b in bindings]


def match_bgp(store: Store, pattern: Sequence[TriplePattern], from_graph: Optional[str] = None) -> List[Binding]:
    """
    All solutions of a basic graph pattern.

    Args:
        store: Store to match against
        pattern: Triple patterns joined left to right
        from_graph: Named graph, or None for the union of all graphs

    Returns:
        List of bindings (a multiset; deterministic for a fixed store)

    Raises:
        UnknownGraphError: If from_graph is not in the store
    """
    return match_graph(store.graph(from_graph), pattern)


# ============================================================================
# Expressions
# ============================================================================


def _number(term: Term, op: str):
    if isinstance(term, Literal) and term.is_number:
        return term.value
    raise EvaluationError(f"type mismatch: '{op}' expects numbers, got {term}")


def _checked(value) -> Literal:
    if isinstance(value, float) and not math.isfinite(value):
        raise EvaluationError("numeric overflow")
    return Literal(value)


def _to_string(term: Term) -> str:
    if isinstance(term, Literal):
        return format_number(term.value) if term.is_number else term.value
    if isinstance(term, IRI):
        return term.value
    raise EvaluationError(f"cannot convert blank node {term} to a string")


def eval_expression(expr: Expression, binding: Binding) -> Term:
    """
    Evaluate an expression under a binding.

    Raises:
        EvaluationError: On unbound variables, type mismatches or division by zero
    """
    if isinstance(expr, Const):
        return expr.term
    if isinstance(expr, Var):
        try:
            return binding[expr.name]
        except KeyError:
            raise EvaluationError(f"unbound variable ?{expr.name}") from None
    if isinstance(expr, BinOp):
        left = _number(eval_expression(expr.left, binding), expr.op)
        right = _number(eval_expression(expr.right, binding), expr.op)
        if expr.op == "+":
            return _checked(left + right)
        if expr.op == "-":
            return _checked(left - right)
        if expr.op == "*":
            return _checked(left * right)
        if right == 0:
            raise EvaluationError("division by zero")
        return _checked(left / right)
    if isinstance(expr, Call):
        args = [eval_expression(a, binding) for a in expr.args]
        if expr.function == "str":
            return Literal(_to_string(args[0]))
        if expr.function == "concat":
            parts = []
            for arg in args:
                if not (isinstance(arg, Literal) and not arg.is_number):
                    raise EvaluationError(f"type mismatch: concat() expects strings, got {arg}")
                parts.append(arg.value)
            return Literal("".join(parts))
        values = [_number(a, expr.function) for a in args]
        if expr.function == "min":
            return Literal(min(values))
        if expr.function == "max":
            return Literal(max(values))
        return Literal(abs(values[0]))
    raise EvaluationError(f"unknown expression node {expr!r}")


# ============================================================================
# Construct
# ============================================================================


def _instantiate(template: TemplateTriple, binding: Binding, blanks: Dict[str, BNode]) -> Triple:
    def node(term):
        if isinstance(term, BNode):
            return blanks[term.label]
        if isinstance(term, Variable):
            return binding[term.name]
        return term

    subject = node(template.subject)
    predicate = node(template.predicate)
    if isinstance(template.object, Const) and isinstance(template.object.term, BNode):
        obj = blanks[template.object.term.label]
    else:
        obj = eval_expression(template.object, binding)
    if isinstance(subject, Literal):
        raise EvaluationError(f"subject {subject} is a literal")
    if not isinstance(predicate, IRI):
        raise EvaluationError(f"predicate {predicate} is not an IRI")
    return Triple(subject, predicate, obj)


def eval_construct_traced(store: Store, query: Query) -> ConstructResult:
    """
    Evaluate a construct query and keep per-binding detail.

    Each binding gets fresh blank nodes for the template blank labels.
    Templates that fail to evaluate for a binding are skipped and reported
    as warnings.

    Raises:
        UnknownGraphError: If the query names a graph that is not in the store
    """
    bindings = match_bgp(store, query.pattern, query.from_graph)
    labels = query.template_blank_labels()
    result = ConstructResult(graph=Graph())
    counter = 0

    for index, binding in enumerate(bindings):
        blanks = {}
        for label in labels:
            blanks[label] = BNode(f"c{counter}")
            counter += 1
        instance = ConstructInstance(binding=binding, blanks=blanks)
        for template in query.templates:
            try:
                triple = _instantiate(template, binding, blanks)
            except EvaluationError as e:
                warning = ConstructWarning(index, template, str(e))
                result.warnings.append(warning)
                logger.warning(f"⚠️ Skipped template for binding {index}: {e}")
                continue
            instance.triples.append(triple)
            result.graph.add(triple)
        result.instances.append(instance)

    logger.debug(
        f"🔧 Construct: {len(bindings)} binding(s), {len(result.graph)} triple(s), "
        f"{len(result.warnings)} warning(s)"
    )
    return result


def eval_construct(store: Store, query: Query) -> Graph:
    """Evaluate a construct query; the result graph has set semantics."""
    return eval_construct_traced(store, query).graph
