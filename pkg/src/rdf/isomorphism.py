"""
Graph isomorphism modulo blank-node relabeling.

Blank nodes are first partitioned by iterated neighbourhood signatures
(colour refinement); a backtracking search then looks for a bijection
between classes of equal colour.
"""

import hashlib
from collections import defaultdict
from typing import Dict, List, Optional

from src.rdf.graph import Graph
from src.rdf.terms import BNode, Literal, Term, Triple


def _term_key(term: Term, colors: Dict[BNode, str]) -> str:
    if isinstance(term, BNode):
        return "_:" + colors[term]
    if isinstance(term, Literal) and term.is_number:
        # 42 and 42.0 are the same literal
        return f"Number:{float(term.value)!r}"
    return f"{type(term).__name__}:{term}"


def _refine(graph: Graph, rounds: int = 4) -> Dict[BNode, str]:
    blanks = graph.blank_nodes()
    colors = {b: "" for b in blanks}
    for _ in range(rounds):
        parts: Dict[BNode, List[str]] = defaultdict(list)
        for t in graph:
            if isinstance(t.subject, BNode):
                parts[t.subject].append(f"out|{t.predicate}|{_term_key(t.object, colors)}")
            if isinstance(t.object, BNode):
                parts[t.object].append(f"in|{t.predicate}|{_term_key(t.subject, colors)}")
        updated = {}
        for b in blanks:
            digest = hashlib.sha1("\n".join(sorted(parts[b])).encode("utf-8")).hexdigest()
            updated[b] = digest
        if len(set(updated.values())) == len(set(colors.values())) and _same_partition(colors, updated):
            colors = updated
            break
        colors = updated
    return colors


def _same_partition(a: Dict[BNode, str], b: Dict[BNode, str]) -> bool:
    groups = defaultdict(set)
    for node, color in a.items():
        groups[color].add(b[node])
    return all(len(v) == 1 for v in groups.values())


def _substitute(triple: Triple, mapping: Dict[BNode, BNode]) -> Optional[Triple]:
    s, p, o = triple
    if isinstance(s, BNode):
        if s not in mapping:
            return None
        s = mapping[s]
    if isinstance(o, BNode):
        if o not in mapping:
            return None
        o = mapping[o]
    return Triple(s, p, o)


def isomorphic(left: Graph, right: Graph) -> bool:
    """
    Check whether two graphs are equal up to a blank-node bijection.

    Args:
        left: First graph
        right: Second graph

    Returns:
        True if a bijection exists
    """
    if len(left) != len(right):
        return False

    ground_left = {t for t in left if not isinstance(t.subject, BNode) and not isinstance(t.object, BNode)}
    ground_right = {t for t in right if not isinstance(t.subject, BNode) and not isinstance(t.object, BNode)}
    if ground_left != ground_right:
        return False

    colors_l = _refine(left)
    colors_r = _refine(right)
    classes_l: Dict[str, List[BNode]] = defaultdict(list)
    classes_r: Dict[str, List[BNode]] = defaultdict(list)
    for b, c in colors_l.items():
        classes_l[c].append(b)
    for b, c in colors_r.items():
        classes_r[c].append(b)
    if {c: len(v) for c, v in classes_l.items()} != {c: len(v) for c, v in classes_r.items()}:
        return False

    right_set = set(right)
    incident: Dict[BNode, List[Triple]] = defaultdict(list)
    for t in left:
        for term in (t.subject, t.object):
            if isinstance(term, BNode):
                incident[term].append(t)
    order = sorted(colors_l, key=lambda b: (len(classes_l[colors_l[b]]), colors_l[b], b.label))

    def consistent(node: BNode, mapping: Dict[BNode, BNode]) -> bool:
        for t in incident[node]:
            image = _substitute(t, mapping)
            if image is not None and image not in right_set:
                return False
        return True

    # Iterative backtracking: large scenes have thousands of blank nodes.
    mapping: Dict[BNode, BNode] = {}
    used: set = set()
    cursors = [0] * len(order)
    index = 0
    while 0 <= index < len(order):
        node = order[index]
        candidates = classes_r[colors_l[node]]
        if node in mapping:
            used.discard(mapping.pop(node))
        placed = False
        while cursors[index] < len(candidates):
            candidate = candidates[cursors[index]]
            cursors[index] += 1
            if candidate in used:
                continue
            mapping[node] = candidate
            if consistent(node, mapping):
                used.add(candidate)
                placed = True
                break
            del mapping[node]
        if placed:
            index += 1
        else:
            cursors[index] = 0
            index -= 1
    return index == len(order)
