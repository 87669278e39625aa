"""
In-memory RDF graphs and the named-graph store.

Graphs keep insertion order (dict-backed sets) so that matching and
serialization are deterministic for a fixed build, independent of string
hash randomization.
"""

from typing import Dict, Iterable, Iterator, List, Optional

from src.errors import StoreFrozenError, UnknownGraphError
from src.logging import logger
from src.rdf.terms import BNode, IRI, Node, Term, Triple, RDF_TYPE


class Graph:
    """A set of triples with subject, predicate and object indexes."""

    def __init__(self, triples: Iterable[Triple] = ()):
        self._triples: Dict[Triple, None] = {}
        self._by_s: Dict[Term, Dict[Triple, None]] = {}
        self._by_p: Dict[Term, Dict[Triple, None]] = {}
        self._by_o: Dict[Term, Dict[Triple, None]] = {}
        self._frozen = False
        for triple in triples:
            self.add(triple)

    # ------------------------------------------------------------------
    # Mutation
    # ------------------------------------------------------------------

    def add(self, triple: Triple) -> bool:
        """
        Add a triple (set semantics).

        Returns:
            True if the triple was new
        """
        if self._frozen:
            raise StoreFrozenError("graph is frozen")
        if triple in self._triples:
            return False
        self._triples[triple] = None
        self._by_s.setdefault(triple.subject, {})[triple] = None
        self._by_p.setdefault(triple.predicate, {})[triple] = None
        self._by_o.setdefault(triple.object, {})[triple] = None
        return True

    def add_all(self, triples: Iterable[Triple]) -> int:
        return sum(1 for t in triples if self.add(t))

    def freeze(self) -> "Graph":
        self._frozen = True
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    # ------------------------------------------------------------------
    # Access
    # ------------------------------------------------------------------

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._triples

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self._triples.keys() == other._triples.keys()

    def __repr__(self) -> str:
        return f"Graph({len(self)} triples)"

    def triples(
        self,
        subject: Optional[Term] = None,
        predicate: Optional[Term] = None,
        obj: Optional[Term] = None,
    ) -> List[Triple]:
        """
        Triples matching the given positions (None matches anything).

        The smallest available index is scanned.
        """
        candidates = None
        for index, key in ((self._by_s, subject), (self._by_p, predicate), (self._by_o, obj)):
            if key is None:
                continue
            bucket = index.get(key)
            if bucket is None:
                return []
            if candidates is None or len(bucket) < len(candidates):
                candidates = bucket
        if candidates is None:
            candidates = self._triples
        return [
            t for t in candidates
            if (subject is None or t.subject == subject)
            and (predicate is None or t.predicate == predicate)
            and (obj is None or t.object == obj)
        ]

    def objects(self, subject: Term, predicate: IRI) -> List[Term]:
        return [t.object for t in self.triples(subject, predicate, None)]

    def value(self, subject: Term, predicate: IRI) -> Optional[Term]:
        """First object for (subject, predicate), or None."""
        found = self.triples(subject, predicate, None)
        return found[0].object if found else None

    def subjects(self, predicate: Optional[IRI] = None, obj: Optional[Term] = None) -> List[Node]:
        seen: Dict[Node, None] = {}
        for t in self.triples(None, predicate, obj):
            seen[t.subject] = None
        return list(seen)

    def types(self, subject: Term) -> List[IRI]:
        return [o for o in self.objects(subject, RDF_TYPE) if isinstance(o, IRI)]

    def has_subject(self, node: Term) -> bool:
        return node in self._by_s

    def nodes(self) -> List[Term]:
        """All subjects and objects, in first-seen order."""
        seen: Dict[Term, None] = {}
        for t in self._triples:
            seen[t.subject] = None
            seen[t.object] = None
        return list(seen)

    def blank_nodes(self) -> List[BNode]:
        return [n for n in self.nodes() if isinstance(n, BNode)]

    # ------------------------------------------------------------------
    # Derived graphs
    # ------------------------------------------------------------------

    def copy(self) -> "Graph":
        return Graph(self._triples)

    def union(self, other: "Graph") -> "Graph":
        merged = self.copy()
        merged.add_all(other)
        return merged

    def scoped(self, scope: str) -> "Graph":
        """Copy with every blank label prefixed by ``scope`` (keeps graphs disjoint)."""
        def rename(term: Term) -> Term:
            return BNode(f"{scope}.{term.label}") if isinstance(term, BNode) else term
        return Graph(Triple(rename(t.subject), t.predicate, rename(t.object)) for t in self._triples)


class Store:
    """
    Named-graph store.

    One writer during the load phase, then frozen; queries over a frozen
    store are pure.
    """

    def __init__(self):
        self._graphs: Dict[str, Graph] = {}
        self._union: Optional[Graph] = None
        self._frozen = False

    def add_graph(self, name: str, graph: Graph, scope_blanks: bool = True) -> Graph:
        """
        Upload a graph under ``name`` (merging if the name exists).

        Blank labels are scoped by the graph name so graphs stay disjoint in
        the union.
        """
        if self._frozen:
            raise StoreFrozenError(f"store is frozen; cannot load graph {name}")
        target = self._graphs.setdefault(name, Graph())
        added = target.add_all(graph.scoped(name) if scope_blanks else graph)
        self._union = None
        logger.debug(f"📥 Loaded {added} triples into graph {name}")
        return target

    def add(self, name: str, triple: Triple) -> bool:
        if self._frozen:
            raise StoreFrozenError("store is frozen")
        self._union = None
        return self._graphs.setdefault(name, Graph()).add(triple)

    def freeze(self) -> "Store":
        if not self._frozen:
            for graph in self._graphs.values():
                graph.freeze()
            self._union = self._build_union().freeze()
            self._frozen = True
            logger.debug(f"🧊 Store frozen with {len(self._graphs)} graph(s)")
        return self

    @property
    def frozen(self) -> bool:
        return self._frozen

    def graph_names(self) -> List[str]:
        return list(self._graphs)

    def graph(self, name: Optional[str] = None) -> Graph:
        """
        The named graph, or the union of all graphs when name is None.

        Raises:
            UnknownGraphError: If the name is not in the store
        """
        if name is None:
            if self._union is None:
                self._union = self._build_union()
            return self._union
        try:
            return self._graphs[name]
        except KeyError:
            raise UnknownGraphError(f"unknown graph: {name}") from None

    def __len__(self) -> int:
        return sum(len(g) for g in self._graphs.values())

    def _build_union(self) -> Graph:
        union = Graph()
        for graph in self._graphs.values():
            union.add_all(graph)
        return union

