"""Name resolution: binds attribute references to table variables.

Turns a SqlAst into a ResolvedQuery where every attribute reference carries
the varId of the FROM item it belongs to.  Works with an explicit Schema or,
when none is given, infers one from the references it sees (first-use order).
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import AmbiguousAttribute, ResolveError, UnknownAttribute, UnknownRelation
from .sqlast import (
    AttrRef,
    Comparison,
    Constant,
    ExistsPredicate,
    InPredicate,
    Schema,
    SqlAst,
)
from .spans import SourceSpan


@dataclass(frozen=True)
class RFrom:
    varId: int
    relation: str  # as written in the query
    alias: str  # lowercase
    span: SourceSpan


@dataclass(frozen=True)
class RAttr:
    varId: int
    attr: str  # lowercase
    span: SourceSpan


@dataclass(frozen=True)
class RComparison:
    left: RAttr
    op: str
    right: RAttr | Constant
    span: SourceSpan


@dataclass(frozen=True)
class RExists:
    negated: bool
    query: "RQuery"
    span: SourceSpan


@dataclass(frozen=True)
class RIn:
    negated: bool
    attr: RAttr
    subquery: "RQuery"
    span: SourceSpan


RConjunct = RComparison | RExists | RIn


@dataclass(frozen=True)
class RQuery:
    distinct: bool
    selectStar: bool
    outputs: tuple[RAttr, ...]
    fromVars: tuple[RFrom, ...]
    conjuncts: tuple[RConjunct, ...]
    span: SourceSpan
    selectSpan: SourceSpan


@dataclass(frozen=True)
class ResolvedQuery:
    root: RQuery
    schema: Schema
    schemaWasInferred: bool
    source: str
    varCount: int
    warnings: tuple[str, ...]


class _Resolver:
    def __init__(self, schema: Schema | None):
        self.schema = schema
        self.counter = 0
        self.inferred: dict[str, list[str]] = {}
        self.var_relation: dict[int, str] = {}  # varId -> relation, lowercase

    def resolve_query(self, ast: SqlAst, outer: list[dict[str, RFrom]]) -> RQuery:
        frame: dict[str, RFrom] = {}
        from_vars: list[RFrom] = []
        for item in ast.fromItems:
            rel_lower = item.relation.lower()
            if self.schema is not None and not self.schema.has_relation(rel_lower):
                raise UnknownRelation(f"unknown relation {item.relation!r}", item.span)
            if item.alias in frame:
                raise ResolveError(f"duplicate alias {item.alias!r} in FROM", item.span)
            var = RFrom(self.counter, item.relation, item.alias, item.span)
            self.counter += 1
            self.var_relation[var.varId] = rel_lower
            if self.schema is None:
                self.inferred.setdefault(rel_lower, [])
            frame[item.alias] = var
            from_vars.append(var)

        chain = [frame] + outer
        outputs = tuple(self.bind(ref, chain) for ref in ast.selectList)
        conjuncts: list[RConjunct] = []
        for c in ast.whereConjuncts:
            if isinstance(c, Comparison):
                left = self.bind(c.left, chain)
                right = c.right if isinstance(c.right, Constant) else self.bind(c.right, chain)
                conjuncts.append(RComparison(left, c.op, right, c.span))
            elif isinstance(c, ExistsPredicate):
                sub = self.resolve_query(c.subquery, chain)
                conjuncts.append(RExists(c.negated, sub, c.span))
            elif isinstance(c, InPredicate):
                attr = self.bind(c.attr, chain)
                sub = self.resolve_query(c.subquery, chain)
                conjuncts.append(RIn(c.negated, attr, sub, c.span))

        return RQuery(ast.selectDistinct, ast.selectStar, outputs,
                      tuple(from_vars), tuple(conjuncts), ast.span, ast.selectSpan)

    def bind(self, ref: AttrRef, chain: list[dict[str, RFrom]]) -> RAttr:
        attr = ref.attr.lower()
        if ref.qualifier is not None:
            alias = ref.qualifier.lower()
            for frame in chain:
                if alias in frame:
                    var = frame[alias]
                    self._check_attr(var, attr, ref.span)
                    return RAttr(var.varId, attr, ref.span)
            raise UnknownRelation(f"unknown alias {ref.qualifier!r}", ref.span)

        for frame in chain:
            if self.schema is not None:
                candidates = [var for var in frame.values()
                              if attr in self.schema.attrs(self.var_relation[var.varId])]
                if len(candidates) > 1:
                    names = ", ".join(sorted(v.alias for v in candidates))
                    raise AmbiguousAttribute(
                        f"attribute {ref.attr!r} is ambiguous (could be {names})", ref.span)
                if candidates:
                    return RAttr(candidates[0].varId, attr, ref.span)
            else:
                if len(frame) > 1:
                    names = ", ".join(sorted(frame))
                    raise AmbiguousAttribute(
                        f"attribute {ref.attr!r} cannot be attributed without a schema "
                        f"(aliases in scope: {names})", ref.span)
                if frame:
                    var = next(iter(frame.values()))
                    self._record(var, attr)
                    return RAttr(var.varId, attr, ref.span)
        raise UnknownAttribute(f"unknown attribute {ref.attr!r}", ref.span)

    def _check_attr(self, var: RFrom, attr: str, span: SourceSpan) -> None:
        if self.schema is not None:
            rel = self.var_relation[var.varId]
            if attr not in self.schema.attrs(rel):
                raise UnknownAttribute(
                    f"relation {var.relation!r} has no attribute {attr!r}", span)
        else:
            self._record(var, attr)

    def _record(self, var: RFrom, attr: str) -> None:
        attrs = self.inferred[self.var_relation[var.varId]]
        if attr not in attrs:
            attrs.append(attr)


def resolve(ast: SqlAst, schema: Schema | None = None, source: str = "") -> ResolvedQuery:
    """Resolve all attribute references in `ast`.

    With a schema, references are validated against it; without one, a schema
    is inferred and unqualified references bind only when a scope level has a
    single table variable.
    """
    r = _Resolver(schema)
    root = r.resolve_query(ast, [])
    if schema is None:
        out_schema = Schema({rel: tuple(attrs) for rel, attrs in r.inferred.items()})
        inferred = True
    else:
        out_schema = schema
        inferred = False
    return ResolvedQuery(root, out_schema, inferred, source, r.counter, ast.warnings)
