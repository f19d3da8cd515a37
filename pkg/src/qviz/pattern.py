"""Pattern identity: canonical forms and hashes for query shapes.

Two queries share a pattern when their quantifier trees are isomorphic under
renaming of table variables and aliases, reordering of FROM lists and
conjuncts, and flipping of comparison operands.  The encoding below maps a
query to a colored directed multigraph; a canonical labeling of that graph
(computed by iterative refinement plus exhaustive individualization) yields a
string that is byte-identical across all queries of the same pattern.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .calculus import (
    AttrOperand,
    CalculusQuery,
    ConstOperand,
    QuantifierBlock,
    forall_transform,
)

_SYMMETRIC = {"=", "<>"}
_FLIP = {">": "<", ">=": "<="}

Edge = tuple[int, int, str]


@dataclass(frozen=True)
class PatternGraph:
    colors: tuple[str, ...]  # vertex id -> color
    edges: tuple[Edge, ...]


def encode_pattern_graph(q: CalculusQuery, forall: bool = True,
                         abstract_constants: bool = False) -> PatternGraph:
    """Encode the query as a colored directed multigraph.

    Vertices: quantifier blocks, table variables, predicates, and output
    positions.  Spans, variable ids, and aliases are deliberately absent so
    that pattern-equal queries produce isomorphic graphs.
    """
    if forall:
        q = forall_transform(q)
    colors: list[str] = []
    edges: list[Edge] = []
    var_vertex: dict[int, int] = {}

    def add_vertex(color: str) -> int:
        colors.append(color)
        return len(colors) - 1

    def visit(block: QuantifierBlock, depth: int) -> int:
        b = add_vertex(f"B|{block.kind}|{depth}")
        for v in block.vars:
            vv = add_vertex(f"V|{v.relation.lower()}")
            var_vertex[v.varId] = vv
            edges.append((b, vv, "member"))
        for p in block.predicates:
            if isinstance(p.right, ConstOperand):
                const = "?" if abstract_constants else str(p.right.value)
                pv = add_vertex(f"P|const|{p.op}|{p.right.kind}|{const}")
                edges.append((pv, var_vertex[p.left.varId], f"arg|{p.left.attr}"))
            elif p.op in _SYMMETRIC:
                pv = add_vertex(f"P|sym|{p.op}")
                edges.append((pv, var_vertex[p.left.varId], f"arg|{p.left.attr}"))
                edges.append((pv, var_vertex[p.right.varId], f"arg|{p.right.attr}"))
            else:
                lo, hi, op = p.left, p.right, p.op
                if op in _FLIP:
                    lo, hi, op = hi, lo, _FLIP[op]
                pv = add_vertex(f"P|asym|{op}")
                edges.append((pv, var_vertex[lo.varId], f"lo|{lo.attr}"))
                edges.append((pv, var_vertex[hi.varId], f"hi|{hi.attr}"))
            edges.append((b, pv, "where"))
        for child in block.children:
            cb = visit(child, depth + 1)
            edges.append((b, cb, "child"))
        return b

    visit(q.root, 0)
    for o in q.outputs:
        ov = add_vertex(f"O|{o.index}")
        edges.append((ov, var_vertex[o.attr.varId], f"bind|{o.attr.attr}"))
    return PatternGraph(tuple(colors), tuple(edges))


def _refine(classes: list[list[int]],
            out_adj: list[list[tuple[int, str]]],
            in_adj: list[list[tuple[int, str]]]) -> list[list[int]]:
    """Equitable refinement of an ordered partition; stable class order."""
    while True:
        cls_of = [0] * sum(len(c) for c in classes)
        for i, c in enumerate(classes):
            for v in c:
                cls_of[v] = i
        new_classes: list[list[int]] = []
        changed = False
        for c in classes:
            if len(c) == 1:
                new_classes.append(c)
                continue
            sigs: dict[tuple, list[int]] = {}
            for v in c:
                sig = (tuple(sorted(f"{lbl}|{cls_of[w]}" for w, lbl in out_adj[v])),
                       tuple(sorted(f"{lbl}|{cls_of[w]}" for w, lbl in in_adj[v])))
                sigs.setdefault(sig, []).append(v)
            if len(sigs) > 1:
                changed = True
            for sig in sorted(sigs):
                new_classes.append(sigs[sig])
        classes = new_classes
        if not changed:
            return classes


def _certificate(graph: PatternGraph, classes: list[list[int]]) -> str:
    pos = {c[0]: i for i, c in enumerate(classes)}
    lines = [f"n{i}|{graph.colors[v]}" for i, v in enumerate(c[0] for c in classes)]
    lines.extend(sorted(f"e|{pos[s]}|{pos[d]}|{lbl}" for s, d, lbl in graph.edges))
    return "\n".join(lines)


def _canonical(graph: PatternGraph) -> str:
    n = len(graph.colors)
    out_adj: list[list[tuple[int, str]]] = [[] for _ in range(n)]
    in_adj: list[list[tuple[int, str]]] = [[] for _ in range(n)]
    for s, d, lbl in graph.edges:
        out_adj[s].append((d, lbl))
        in_adj[d].append((s, lbl))

    initial: dict[str, list[int]] = {}
    for v, color in enumerate(graph.colors):
        initial.setdefault(color, []).append(v)
    start = [initial[c] for c in sorted(initial)]

    best: str | None = None

    def search(classes: list[list[int]]) -> None:
        nonlocal best
        classes = _refine(classes, out_adj, in_adj)
        target = next((i for i, c in enumerate(classes) if len(c) > 1), None)
        if target is None:
            cert = _certificate(graph, classes)
            if best is None or cert < best:
                best = cert
            return
        cell = classes[target]
        for v in cell:
            rest = [w for w in cell if w != v]
            search(classes[:target] + [[v], rest] + classes[target + 1:])

    search(start)
    assert best is not None
    return best


def canonical_form(q: CalculusQuery, forall: bool = True,
                   abstract_constants: bool = False) -> str:
    """Canonical string for the query's pattern.

    Byte-identical for pattern-equal queries, distinct otherwise.  By default
    the forall rewrite is applied first so that a not-exists/not-exists pair
    and its universal spelling share a pattern.
    """
    graph = encode_pattern_graph(q, forall=forall,
                                 abstract_constants=abstract_constants)
    return "pattern-v1\n" + _canonical(graph)


def pattern_hash(q: CalculusQuery, forall: bool = True,
                 abstract_constants: bool = False) -> str:
    """sha256 hex digest of the canonical form."""
    form = canonical_form(q, forall=forall, abstract_constants=abstract_constants)
    return hashlib.sha256(form.encode("utf-8")).hexdigest()


def cluster_queries(items: list[tuple[str, CalculusQuery]], forall: bool = True,
                    abstract_constants: bool = False) -> list[dict]:
    """Group named queries by pattern hash.

    Returns a list of {"hash", "size", "members"} dicts, largest cluster
    first, ties broken by hash; members sorted by name.
    """
    groups: dict[str, list[str]] = {}
    for name, q in items:
        h = pattern_hash(q, forall=forall, abstract_constants=abstract_constants)
        groups.setdefault(h, []).append(name)
    return [{"hash": h, "size": len(members), "members": sorted(members)}
            for h, members in sorted(groups.items(),
                                     key=lambda kv: (-len(kv[1]), kv[0]))]
