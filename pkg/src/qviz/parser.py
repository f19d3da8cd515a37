"""Recursive-descent parser for the supported SQL subset.

Grammar (case-insensitive keywords):

    query      := SELECT [DISTINCT] selectList FROM fromList [WHERE conjuncts] [";"]
    selectList := "*" | attrRef ("," attrRef)*
    fromList   := fromItem ("," fromItem)*
    fromItem   := ident [[AS] ident]
    conjuncts  := conjunct (AND conjunct)*
    conjunct   := comparison | [NOT] EXISTS "(" query ")" | attrRef [NOT] IN "(" query ")"
    comparison := operand op operand
    attrRef    := ident ["." ident]

Anything outside the subset (OR, GROUP BY, JOIN, aggregates, ...) raises
UnsupportedFeature rather than ParseError so callers can distinguish "bad
syntax" from "valid SQL we do not handle".
"""
from __future__ import annotations

from .errors import ParseError, UnsupportedFeature
from .lexer import Token, tokenize
from .sqlast import (
    AttrRef,
    Comparison,
    Conjunct,
    Constant,
    ExistsPredicate,
    FromItem,
    InPredicate,
    SqlAst,
)
from .spans import SourceSpan

_MIRROR = {"<": ">", ">": "<", "<=": ">=", ">=": "<=", "=": "=", "<>": "<>"}

_REJECTED_KEYWORDS = {
    "or": "OR",
    "group": "GROUP BY",
    "having": "HAVING",
    "order": "ORDER BY",
    "union": "UNION",
    "join": "JOIN",
    "left": "JOIN",
    "right": "JOIN",
    "full": "JOIN",
    "outer": "JOIN",
    "inner": "JOIN",
    "cross": "JOIN",
    "on": "JOIN",
    "limit": "LIMIT",
    "offset": "OFFSET",
}


class _Parser:
    def __init__(self, source: str, tokens: list[Token]):
        self.source = source
        self.tokens = tokens
        self.pos = 0

    # -- token helpers -----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token | None:
        idx = self.pos + ahead
        return self.tokens[idx] if idx < len(self.tokens) else None

    def advance(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise self._eof_error(("token",))
        self.pos += 1
        return tok

    def at_kw(self, word: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == "kw" and tok.lower == word

    def expect_kw(self, word: str) -> Token:
        if not self.at_kw(word):
            raise self._error((word.upper(),))
        return self.advance()

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            raise self._error((what,))
        return self.advance()

    def _end_span(self) -> SourceSpan:
        end = len(self.source)
        return SourceSpan(end, end)

    def _eof_error(self, expected: tuple[str, ...]) -> ParseError:
        return ParseError(
            f"unexpected end of input; expected {' or '.join(expected)}",
            self._end_span(), expected)

    def _error(self, expected: tuple[str, ...]) -> ParseError:
        tok = self.peek()
        if tok is None:
            return self._eof_error(expected)
        return ParseError(
            f"unexpected {tok.lexeme!r}; expected {' or '.join(expected)}",
            tok.span, expected)

    def _reject_kw(self) -> None:
        """Raise UnsupportedFeature if the cursor sits on a rejected keyword."""
        tok = self.peek()
        if tok is not None and tok.kind == "kw" and tok.lower in _REJECTED_KEYWORDS:
            raise UnsupportedFeature(_REJECTED_KEYWORDS[tok.lower], tok.span)

    # -- grammar -----------------------------------------------------------

    def parse_query(self, top_level: bool) -> SqlAst:
        start_tok = self.expect_kw("select")
        distinct = False
        if self.at_kw("distinct"):
            self.advance()
            distinct = True

        select_star = False
        select_list: list[AttrRef] = []
        tok = self.peek()
        if tok is not None and tok.kind == "star":
            if top_level:
                raise UnsupportedFeature("SELECT *", tok.span,
                                         "top-level SELECT * is not supported; list attributes explicitly")
            self.advance()
            select_star = True
            select_span = tok.span
        else:
            select_list.append(self.parse_attr_ref())
            while self._at_kind("comma"):
                self.advance()
                select_list.append(self.parse_attr_ref())
            select_span = select_list[0].span.merge(select_list[-1].span)

        self.expect_kw("from")
        from_items = [self.parse_from_item()]
        while self._at_kind("comma"):
            self.advance()
            from_items.append(self.parse_from_item())
        if not self.at_kw("where"):
            self._reject_kw()

        conjuncts: list[Conjunct] = []
        if self.at_kw("where"):
            self.advance()
            conjuncts.append(self.parse_conjunct())
            while True:
                if self.at_kw("and"):
                    self.advance()
                    conjuncts.append(self.parse_conjunct())
                    continue
                self._reject_kw()
                break

        last = self.tokens[self.pos - 1]
        if top_level and self._at_kind("semi"):
            last = self.advance()
        if top_level:
            trailing = self.peek()
            if trailing is not None:
                self._reject_kw()
                raise ParseError(f"unexpected {trailing.lexeme!r} after end of query",
                                 trailing.span, ("end of input",))

        warnings: tuple[str, ...] = ()
        if top_level and not distinct:
            warnings = ("DISTINCT not specified; results are computed under set semantics",)

        return SqlAst(
            selectDistinct=distinct,
            selectStar=select_star,
            selectList=tuple(select_list),
            fromItems=tuple(from_items),
            whereConjuncts=tuple(conjuncts),
            span=start_tok.span.merge(last.span),
            selectSpan=select_span,
            warnings=warnings,
        )

    def _at_kind(self, kind: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == kind

    def parse_attr_ref(self) -> AttrRef:
        self._reject_kw()
        first = self.expect("ident", "attribute reference")
        nxt = self.peek()
        if nxt is not None and nxt.kind == "lparen":
            raise UnsupportedFeature(f"function call {first.lexeme.upper()}()",
                                     first.span.merge(nxt.span))
        if self._at_kind("dot"):
            self.advance()
            attr = self.expect("ident", "attribute name")
            return AttrRef(first.lexeme, attr.lexeme, first.span.merge(attr.span))
        return AttrRef(None, first.lexeme, first.span)

    def parse_from_item(self) -> FromItem:
        self._reject_kw()
        rel = self.expect("ident", "relation name")
        span = rel.span
        alias = rel.lexeme.lower()
        explicit = False
        if self.at_kw("as"):
            self.advance()
            alias_tok = self.expect("ident", "alias")
            alias = alias_tok.lexeme.lower()
            span = span.merge(alias_tok.span)
            explicit = True
        elif self._at_kind("ident"):
            alias_tok = self.advance()
            alias = alias_tok.lexeme.lower()
            span = span.merge(alias_tok.span)
            explicit = True
        else:
            self._reject_kw()
        return FromItem(rel.lexeme, alias, span, explicit)

    def parse_conjunct(self) -> Conjunct:
        if self.at_kw("not"):
            not_tok = self.advance()
            ex = self.expect_kw("exists")
            sub, close = self.parse_subquery()
            return ExistsPredicate(True, sub, not_tok.span.merge(close))
        if self.at_kw("exists"):
            ex_tok = self.advance()
            sub, close = self.parse_subquery()
            return ExistsPredicate(False, sub, ex_tok.span.merge(close))

        left = self.parse_operand()

        if self.at_kw("not") or self.at_kw("in"):
            negated = False
            anchor = self.peek()
            if self.at_kw("not"):
                self.advance()
                negated = True
                if not self.at_kw("in"):
                    raise self._error(("IN",))
            self.expect_kw("in")
            if not isinstance(left, AttrRef):
                raise ParseError("left side of IN must be an attribute reference",
                                 left.span, ("attribute reference",))
            sub, close = self.parse_subquery()
            if sub.selectStar or len(sub.selectList) != 1:
                raise ParseError("IN subquery must select exactly one attribute",
                                 sub.selectSpan, ("single select item",))
            return InPredicate(negated, left, sub, left.span.merge(close))

        op = self.expect("op", "comparison operator")
        right = self.parse_operand()
        span = left.span.merge(right.span)
        if isinstance(left, Constant) and isinstance(right, Constant):
            raise UnsupportedFeature("constant-to-constant comparison", span)
        if isinstance(left, Constant):
            # normalize constants to the right side, mirroring the operator
            left, right = right, left
            return Comparison(left, _MIRROR[op.lexeme], right, span)
        return Comparison(left, op.lexeme, right, span)

    def parse_operand(self) -> AttrRef | Constant:
        tok = self.peek()
        if tok is None:
            raise self._eof_error(("attribute reference", "constant"))
        if tok.kind == "int":
            self.advance()
            return Constant(int(tok.lexeme), tok.span)
        if tok.kind == "string":
            self.advance()
            return Constant(tok.lexeme[1:-1], tok.span)
        if tok.kind == "ident":
            return self.parse_attr_ref()
        self._reject_kw()
        raise self._error(("attribute reference", "constant"))

    def parse_subquery(self) -> tuple[SqlAst, SourceSpan]:
        self.expect("lparen", "(")
        sub = self.parse_query(top_level=False)
        close = self.expect("rparen", ")")
        return sub, close.span


def parse(source: str) -> SqlAst:
    """Parse `source` into a SqlAst.  Raises LexError, ParseError, or
    UnsupportedFeature."""
    tokens = tokenize(source)
    if not tokens:
        raise ParseError("empty input", SourceSpan(0, 0), ("SELECT",))
    return _Parser(source, tokens).parse_query(top_level=True)
