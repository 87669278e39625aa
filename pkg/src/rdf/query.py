"""
Extended CONSTRUCT queries.

Grammar (UTF-8, keywords case-insensitive):

    query := "construct" "{" triples "}" ("from" NAME)? "where" "{" triples "}"

Triples are written Turtle style: ``;`` repeats the subject, ``,`` repeats
subject and predicate, ``[ ... ]`` opens an anonymous node, ``a`` stands
for rdf:type and the final ``.`` of a block is optional. In templates the
object position takes an expression with ``+ - * /``, parentheses and the
functions concat, str, min, max and abs.
"""

import json
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple, Union

from src.errors import QuerySyntaxError
from src.rdf.terms import BNode, IRI, Literal, PREFIXES, RDF_TYPE, Term


# ============================================================================
# Query model
# ============================================================================


@dataclass(frozen=True, slots=True)
class Variable:
    """A query variable (``?name``)."""
    name: str

    def __str__(self) -> str:
        return f"?{self.name}"


PatternTerm = Union[IRI, BNode, Literal, Variable]


@dataclass(frozen=True, slots=True)
class Const:
    term: Term


@dataclass(frozen=True, slots=True)
class Var:
    name: str


@dataclass(frozen=True, slots=True)
class BinOp:
    op: str
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True, slots=True)
class Call:
    function: str
    args: Tuple["Expression", ...]


Expression = Union[Const, Var, BinOp, Call]

# function name -> (min arity, max arity or None)
FUNCTIONS: Dict[str, Tuple[int, Optional[int]]] = {
    "concat": (1, None),
    "str": (1, 1),
    "min": (2, None),
    "max": (2, None),
    "abs": (1, 1),
}


@dataclass(frozen=True, slots=True)
class TriplePattern:
    subject: PatternTerm
    predicate: PatternTerm
    object: PatternTerm


@dataclass(frozen=True, slots=True)
class TemplateTriple:
    subject: Union[IRI, BNode, Variable]
    predicate: Union[IRI, Variable]
    object: Expression


@dataclass
class Query:
    """A parsed construct query."""
    templates: List[TemplateTriple] = field(default_factory=list)
    from_graph: Optional[str] = None
    pattern: List[TriplePattern] = field(default_factory=list)

    @property
    def variables(self) -> Set[str]:
        """Variables bound by the where pattern."""
        names = set()
        for tp in self.pattern:
            for term in (tp.subject, tp.predicate, tp.object):
                if isinstance(term, Variable):
                    names.add(term.name)
        return names

    def template_blank_labels(self) -> List[str]:
        """Template blank labels in first-use order."""
        seen: Dict[str, None] = {}
        for t in self.templates:
            if isinstance(t.subject, BNode):
                seen[t.subject.label] = None
            if isinstance(t.object, Const) and isinstance(t.object.term, BNode):
                seen[t.object.term.label] = None
        return list(seen)

    def constructed_types(self) -> List[IRI]:
        """IRIs used as rdf:type objects in the templates."""
        found: Dict[IRI, None] = {}
        for t in self.templates:
            if t.predicate == RDF_TYPE and isinstance(t.object, Const) and isinstance(t.object.term, IRI):
                found[t.object.term] = None
        return list(found)


def expression_variables(expr: Expression) -> List[str]:
    if isinstance(expr, Var):
        return [expr.name]
    if isinstance(expr, BinOp):
        return expression_variables(expr.left) + expression_variables(expr.right)
    if isinstance(expr, Call):
        return [name for arg in expr.args for name in expression_variables(arg)]
    return []


# ============================================================================
# Tokenizer
# ============================================================================

_TOKEN_SPEC = [
    ("ws", r"[ \t\r\n]+"),
    ("comment", r"#[^\n]*"),
    ("iri", r"<[^<>\"{}|^`\\\s]*>"),
    ("var", r"\?[A-Za-z_][A-Za-z0-9_]*"),
    ("bnode", r"_:[A-Za-z0-9_]+"),
    ("pname", r"(?:[A-Za-z][A-Za-z0-9_-]*)?:[A-Za-z0-9_][A-Za-z0-9_-]*"),
    ("number", r"\d+(?:\.\d+)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?"),
    ("string", r'"(?:[^"\\\n]|\\.)*"'),
    ("name", r"[A-Za-z_][A-Za-z0-9_]*"),
    ("punct", r"[{}()\[\];,.+\-*/]"),
]
_TOKEN_RE = re.compile("|".join(f"(?P<{kind}>{rx})" for kind, rx in _TOKEN_SPEC))


@dataclass(frozen=True, slots=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> List[Token]:
    """Split query text into tokens with 1-based line/column positions."""
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if not match:
            raise QuerySyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = match.lastgroup
        chunk = match.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, chunk, line, pos - line_start + 1))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = match.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# ============================================================================
# Parser
# ============================================================================


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.anon = 0
        self.var_positions: Dict[str, Token] = {}

    # -- token helpers ------------------------------------------------------

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != "eof":
            self.pos += 1
        return token

    def error(self, message: str, token: Optional[Token] = None) -> QuerySyntaxError:
        token = token or self.current
        return QuerySyntaxError(message, token.line, token.column)

    def at_punct(self, symbol: str) -> bool:
        return self.current.kind == "punct" and self.current.text == symbol

    def at_keyword(self, word: str) -> bool:
        return self.current.kind == "name" and self.current.text.lower() == word

    def expect_punct(self, symbol: str) -> Token:
        if not self.at_punct(symbol):
            found = self.current.text or "end of input"
            raise self.error(f"expected '{symbol}', found '{found}'")
        return self.advance()

    def expect_keyword(self, word: str) -> Token:
        if not self.at_keyword(word):
            found = self.current.text or "end of input"
            raise self.error(f"expected '{word}', found '{found}'")
        return self.advance()

    def fresh_anon(self) -> BNode:
        self.anon += 1
        return BNode(f"anon.{self.anon}")

    # -- terms --------------------------------------------------------------

    def term(self, allow_literal: bool = True) -> PatternTerm:
        token = self.current
        if token.kind == "iri":
            self.advance()
            if len(token.text) < 3:
                raise self.error("empty IRI", token)
            return IRI(token.text[1:-1])
        if token.kind == "pname":
            self.advance()
            prefix, _, local = token.text.partition(":")
            if prefix not in PREFIXES:
                raise self.error(f"unknown prefix '{prefix}:'", token)
            return IRI(PREFIXES[prefix] + local)
        if token.kind == "var":
            self.advance()
            name = token.text[1:]
            self.var_positions.setdefault(name, token)
            return Variable(name)
        if token.kind == "bnode":
            self.advance()
            return BNode(token.text[2:])
        if allow_literal:
            if token.kind == "number":
                self.advance()
                return Literal(_number(token.text))
            if token.kind == "string":
                self.advance()
                return Literal(json.loads(token.text))
            if self.at_punct("-") and self.tokens[self.pos + 1].kind == "number":
                self.advance()
                return Literal(-_number(self.advance().text))
        if token.kind == "name" and token.text == "a":
            raise self.error("'a' is only allowed in predicate position", token)
        found = token.text or "end of input"
        raise self.error(f"expected a term, found '{found}'", token)

    def verb(self) -> PatternTerm:
        if self.current.kind == "name" and self.current.text == "a":
            self.advance()
            return RDF_TYPE
        token = self.current
        predicate = self.term(allow_literal=False)
        if isinstance(predicate, BNode):
            raise self.error("a blank node cannot be a predicate", token)
        return predicate

    # -- expressions ----------------------------------------------------------

    def expression(self) -> Expression:
        left = self.product()
        while self.at_punct("+") or self.at_punct("-"):
            op = self.advance().text
            left = BinOp(op, left, self.product())
        return left

    def product(self) -> Expression:
        left = self.unary()
        while self.at_punct("*") or self.at_punct("/"):
            op = self.advance().text
            left = BinOp(op, left, self.unary())
        return left

    def unary(self) -> Expression:
        if self.at_punct("-"):
            self.advance()
            operand = self.unary()
            if isinstance(operand, Const) and isinstance(operand.term, Literal) and operand.term.is_number:
                return Const(Literal(-operand.term.value))
            return BinOp("-", Const(Literal(0)), operand)
        return self.primary()

    def primary(self) -> Expression:
        token = self.current
        if self.at_punct("("):
            self.advance()
            inner = self.expression()
            self.expect_punct(")")
            return inner
        if token.kind == "name" and self.tokens[self.pos + 1].text == "(":
            name = token.text.lower()
            if name not in FUNCTIONS:
                raise self.error(f"unknown function '{token.text}'", token)
            self.advance()
            self.advance()
            args = [self.expression()]
            while self.at_punct(","):
                self.advance()
                args.append(self.expression())
            self.expect_punct(")")
            low, high = FUNCTIONS[name]
            if len(args) < low or (high is not None and len(args) > high):
                expected = str(low) if high == low else f"at least {low}"
                raise self.error(f"{name}() takes {expected} argument(s), got {len(args)}", token)
            return Call(name, tuple(args))
        term = self.term()
        if isinstance(term, Variable):
            return Var(term.name)
        return Const(term)

    # -- triple blocks ------------------------------------------------------

    def block(self, template: bool) -> list:
        self.expect_punct("{")
        triples: list = []
        while not self.at_punct("}"):
            if self.at_punct("["):
                subject = self.anon_node(template, triples)
                if not (self.at_punct(".") or self.at_punct("}")):
                    self.property_list(subject, template, triples)
            else:
                subject = self.term(allow_literal=False)
                self.property_list(subject, template, triples)
            if self.at_punct("."):
                self.advance()
            elif not self.at_punct("}"):
                raise self.error(f"expected '.' or '}}', found '{self.current.text or 'end of input'}'")
        self.advance()
        return triples

    def property_list(self, subject, template: bool, out: list) -> None:
        while True:
            predicate = self.verb()
            while True:
                obj = self.object(template, out)
                if template:
                    out.append(TemplateTriple(subject, predicate, obj))
                else:
                    out.append(TriplePattern(subject, predicate, obj))
                if not self.at_punct(","):
                    break
                self.advance()
            if not self.at_punct(";"):
                return
            self.advance()
            # trailing ';' before '.', ']' or '}'
            if self.at_punct(".") or self.at_punct("]") or self.at_punct("}"):
                return

    def object(self, template: bool, out: list):
        if self.at_punct("["):
            node = self.anon_node(template, out)
            return Const(node) if template else node
        if template:
            return self.expression()
        return self.term()

    def anon_node(self, template: bool, out: list) -> BNode:
        self.expect_punct("[")
        node = self.fresh_anon()
        if not self.at_punct("]"):
            self.property_list(node, template, out)
        self.expect_punct("]")
        return node

    # -- query --------------------------------------------------------------

    def query(self) -> Query:
        self.expect_keyword("construct")
        templates = self.block(template=True)
        from_graph = None
        if self.at_keyword("from"):
            self.advance()
            token = self.advance()
            if token.kind == "iri":
                from_graph = token.text[1:-1]
            elif token.kind == "pname":
                prefix, _, local = token.text.partition(":")
                if prefix not in PREFIXES:
                    raise self.error(f"unknown prefix '{prefix}:'", token)
                from_graph = PREFIXES[prefix] + local
            elif token.kind == "name":
                from_graph = token.text
            else:
                raise self.error("expected a graph name after 'from'", token)
        self.expect_keyword("where")
        pattern = self.block(template=False)
        if self.current.kind != "eof":
            raise self.error(f"unexpected '{self.current.text}' after query")
        return Query(templates=templates, from_graph=from_graph, pattern=pattern)


def _number(text: str) -> Union[int, float]:
    if re.fullmatch(r"\d+", text):
        return int(text)
    return float(text)


def _check(query: Query, parser: _Parser) -> None:
    bound = query.variables
    for t in query.templates:
        used = [term.name for term in (t.subject, t.predicate) if isinstance(term, Variable)]
        used += expression_variables(t.object)
        for name in used:
            if name not in bound:
                token = parser.var_positions.get(name)
                line, column = (token.line, token.column) if token else (0, 0)
                raise QuerySyntaxError(f"unbound variable ?{name} in construct template", line, column)

    pattern_blanks = set()
    for tp in query.pattern:
        for term in (tp.subject, tp.object):
            if isinstance(term, BNode):
                pattern_blanks.add(term.label)
    shared = [label for label in query.template_blank_labels() if label in pattern_blanks]
    if shared:
        raise QuerySyntaxError(f"blank label _:{shared[0]} used in both construct and where", 0, 0)


def parse_query(text: str) -> Query:
    """
    Parse an extended construct query.

    Args:
        text: Query text

    Returns:
        Parsed Query

    Raises:
        QuerySyntaxError: On syntax errors, unknown functions or prefixes,
            wrong arity, template variables missing from the pattern
    """
    parser = _Parser(text)
    query = parser.query()
    _check(query, parser)
    return query
