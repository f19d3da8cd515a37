"""Tuple-calculus intermediate representation and lowering from resolved SQL.

A query becomes a tree of quantifier blocks.  The root block holds the
top-level table variables; each [NOT] EXISTS or [NOT] IN conjunct becomes a
child block.  IN predicates are collapsed into EXISTS blocks with an extra
equality predicate joining the outer attribute to the subquery's output, so
the two spellings lower to the same shape.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .resolver import RComparison, RExists, RIn, RQuery, ResolvedQuery
from .sqlast import Constant, Schema
from .spans import SourceSpan


@dataclass(frozen=True)
class TableVar:
    varId: int
    relation: str  # as written in the query
    alias: str
    span: SourceSpan


@dataclass(frozen=True)
class AttrOperand:
    varId: int
    attr: str
    span: SourceSpan


@dataclass(frozen=True)
class ConstOperand:
    value: int | str
    span: SourceSpan

    @property
    def kind(self) -> str:
        return "int" if isinstance(self.value, int) else "string"


@dataclass(frozen=True)
class Predicate:
    predId: int
    left: AttrOperand
    op: str  # = <> < <= > >=
    right: AttrOperand | ConstOperand
    span: SourceSpan


BLOCK_KINDS = ("root", "exists", "not-exists", "forall-implies")


@dataclass(frozen=True)
class QuantifierBlock:
    """One quantifier scope.

    For kind `forall-implies` the block's own vars and predicates form the
    hypothesis and its single child block (kind `exists`) the conclusion.
    """
    blockId: int
    kind: str
    vars: tuple[TableVar, ...]
    predicates: tuple[Predicate, ...]
    children: tuple["QuantifierBlock", ...]
    span: SourceSpan


@dataclass(frozen=True)
class OutputBinding:
    index: int
    attr: AttrOperand
    name: str  # display label
    span: SourceSpan


@dataclass(frozen=True)
class CalculusQuery:
    root: QuantifierBlock
    outputs: tuple[OutputBinding, ...]
    distinct: bool
    source: str
    schema: Schema
    schemaWasInferred: bool
    spanMap: dict[str, SourceSpan]
    warnings: tuple[str, ...]


def walk_blocks(block: QuantifierBlock):
    """Yield blocks in preorder."""
    yield block
    for child in block.children:
        yield from walk_blocks(child)


def all_vars(q: CalculusQuery) -> list[TableVar]:
    """All table variables in source order."""
    out: list[TableVar] = []
    for b in walk_blocks(q.root):
        out.extend(b.vars)
    return out


def nesting_depth(q: CalculusQuery) -> int:
    """Length of the longest chain of child blocks below the root."""
    def depth(b: QuantifierBlock) -> int:
        return 1 + max((depth(c) for c in b.children), default=-1)
    return depth(q.root)


class _Lowerer:
    def __init__(self) -> None:
        self.pred_counter = 0
        self.block_counter = 0

    def new_pred(self, left: AttrOperand, op: str,
                 right: AttrOperand | ConstOperand, span: SourceSpan) -> Predicate:
        p = Predicate(self.pred_counter, left, op, right, span)
        self.pred_counter += 1
        return p

    def lower_query(self, rq: RQuery, kind: str,
                    extra: list[Predicate] | None = None) -> QuantifierBlock:
        block_id = self.block_counter
        self.block_counter += 1
        vars_ = tuple(TableVar(f.varId, f.relation, f.alias, f.span) for f in rq.fromVars)
        preds: list[Predicate] = list(extra or [])
        children: list[QuantifierBlock] = []
        for c in rq.conjuncts:
            if isinstance(c, RComparison):
                left = AttrOperand(c.left.varId, c.left.attr, c.left.span)
                right = (ConstOperand(c.right.value, c.right.span)
                         if isinstance(c.right, Constant)
                         else AttrOperand(c.right.varId, c.right.attr, c.right.span))
                preds.append(self.new_pred(left, c.op, right, c.span))
            elif isinstance(c, RExists):
                child_kind = "not-exists" if c.negated else "exists"
                children.append(self.lower_query(c.query, child_kind))
            elif isinstance(c, RIn):
                child_kind = "not-exists" if c.negated else "exists"
                outer = AttrOperand(c.attr.varId, c.attr.attr, c.attr.span)
                out = c.subquery.outputs[0]
                inner = AttrOperand(out.varId, out.attr, out.span)
                eq = self.new_pred(outer, "=", inner, outer.span.merge(inner.span))
                children.append(self.lower_query(c.subquery, child_kind, extra=[eq]))
        return QuantifierBlock(block_id, kind, vars_, tuple(preds),
                               tuple(children), rq.span)


def lower(resolved: ResolvedQuery) -> CalculusQuery:
    """Lower a resolved query into the quantifier-block representation."""
    lw = _Lowerer()
    root = lw.lower_query(resolved.root, "root")
    outputs = tuple(
        OutputBinding(i, AttrOperand(a.varId, a.attr, a.span), a.attr, a.span)
        for i, a in enumerate(resolved.root.outputs))

    span_map: dict[str, SourceSpan] = {"select": resolved.root.selectSpan}
    for b in walk_blocks(root):
        span_map[f"block:{b.blockId}"] = b.span
        for v in b.vars:
            span_map[f"var:{v.varId}"] = v.span
        for p in b.predicates:
            span_map[f"pred:{p.predId}"] = p.span
    for o in outputs:
        span_map[f"out:{o.index}"] = o.span

    return CalculusQuery(root, outputs, resolved.root.distinct, resolved.source,
                         resolved.schema, resolved.schemaWasInferred, span_map,
                         resolved.warnings)


def _rewrite(block: QuantifierBlock) -> QuantifierBlock:
    children = tuple(_rewrite(c) for c in block.children)
    if (block.kind == "not-exists" and len(children) == 1
            and children[0].kind == "not-exists"):
        inner = replace(children[0], kind="exists")
        return replace(block, kind="forall-implies", children=(inner,))
    return replace(block, children=children)


def forall_transform(q: CalculusQuery) -> CalculusQuery:
    """Rewrite not-exists pairs into universal implications, bottom-up.

    A not-exists block whose only child is another not-exists block becomes a
    forall-implies block (its own vars and predicates are the hypothesis) with
    the child turned into an exists conclusion.  A single post-order pass is a
    fixpoint: rewriting never creates a new matching pair above it.
    """
    return replace(q, root=_rewrite(q.root))
