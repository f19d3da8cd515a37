"""Syntax tree for the supported SQL subset.

Every node keeps the source span it was parsed from so later stages can map
diagram elements back to character ranges in the original text.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .spans import SourceSpan


@dataclass(frozen=True)
class AttrRef:
    """`alias.attr` or bare `attr` (qualifier is None)."""
    qualifier: str | None
    attr: str
    span: SourceSpan


@dataclass(frozen=True)
class Constant:
    """Integer or string literal; `value` is the decoded Python value."""
    value: int | str
    span: SourceSpan

    @property
    def kind(self) -> str:
        return "int" if isinstance(self.value, int) else "string"


@dataclass(frozen=True)
class Comparison:
    left: AttrRef
    op: str  # one of = <> < <= > >=
    right: AttrRef | Constant
    span: SourceSpan


@dataclass(frozen=True)
class FromItem:
    relation: str
    alias: str  # defaults to relation name lowercased
    span: SourceSpan
    aliasWasExplicit: bool


@dataclass(frozen=True)
class ExistsPredicate:
    negated: bool
    subquery: "SqlAst"
    span: SourceSpan


@dataclass(frozen=True)
class InPredicate:
    negated: bool
    attr: AttrRef
    subquery: "SqlAst"
    span: SourceSpan


Conjunct = Comparison | ExistsPredicate | InPredicate


@dataclass(frozen=True)
class SqlAst:
    selectDistinct: bool
    selectStar: bool
    selectList: tuple[AttrRef, ...]
    fromItems: tuple[FromItem, ...]
    whereConjuncts: tuple[Conjunct, ...]
    span: SourceSpan
    selectSpan: SourceSpan
    warnings: tuple[str, ...] = field(default=())


@dataclass(frozen=True)
class Schema:
    """Relation name (lowercase) to ordered attribute names (lowercase)."""
    relations: dict[str, tuple[str, ...]]

    def has_relation(self, name: str) -> bool:
        return name.lower() in self.relations

    def attrs(self, name: str) -> tuple[str, ...]:
        return self.relations[name.lower()]


def _print_attr(a: AttrRef) -> str:
    return f"{a.qualifier}.{a.attr}" if a.qualifier else a.attr


def _print_operand(x: AttrRef | Constant) -> str:
    if isinstance(x, AttrRef):
        return _print_attr(x)
    return str(x.value) if isinstance(x.value, int) else f"'{x.value}'"


def _print_conjunct(c: Conjunct) -> str:
    if isinstance(c, Comparison):
        return f"{_print_attr(c.left)} {c.op} {_print_operand(c.right)}"
    if isinstance(c, ExistsPredicate):
        word = "not exists" if c.negated else "exists"
        return f"{word} ({print_sql(c.subquery)})"
    word = "not in" if c.negated else "in"
    return f"{_print_attr(c.attr)} {word} ({print_sql(c.subquery)})"


def print_sql(ast: SqlAst) -> str:
    """Render the tree back to query text.

    Parsing the result gives a tree identical to `ast` up to spans; implicit
    aliases stay implicit so that round-tripping is exact.
    """
    parts = ["select"]
    if ast.selectDistinct:
        parts.append("distinct")
    if ast.selectStar:
        parts.append("*")
    else:
        parts.append(", ".join(_print_attr(a) for a in ast.selectList))
    parts.append("from")
    froms = []
    for f in ast.fromItems:
        froms.append(f"{f.relation} {f.alias}" if f.aliasWasExplicit
                     else f.relation)
    parts.append(", ".join(froms))
    if ast.whereConjuncts:
        parts.append("where")
        parts.append(" and ".join(_print_conjunct(c)
                                  for c in ast.whereConjuncts))
    return " ".join(parts)
