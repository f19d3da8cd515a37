"""Tokenizer for the supported SQL subset."""
from __future__ import annotations

from typing import NamedTuple

from .errors import LexError
from .spans import SourceSpan, line_col

KEYWORDS = frozenset({
    "select", "distinct", "from", "where", "and", "not", "exists", "in", "as",
    # recognized so the parser can reject them with a precise message
    "or", "group", "by", "having", "order", "union", "join", "left", "right",
    "full", "outer", "inner", "cross", "on", "limit", "offset",
})

OPERATORS = ("<=", ">=", "<>", "=", "<", ">")


class Token(NamedTuple):
    kind: str  # kw | ident | int | string | op | dot | comma | lparen | rparen | star | semi
    lexeme: str
    span: SourceSpan

    @property
    def lower(self) -> str:
        return self.lexeme.lower()


def _ident_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _ident_cont(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def tokenize(source: str) -> list[Token]:
    """Split `source` into tokens with disjoint ascending spans.

    Raises LexError for any character outside the subset alphabet.  Quoted
    strings use single quotes with no escape sequences.
    """
    tokens: list[Token] = []
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        start = i
        if _ident_start(ch):
            while i < n and _ident_cont(source[i]):
                i += 1
            lexeme = source[start:i]
            kind = "kw" if lexeme.lower() in KEYWORDS else "ident"
            tokens.append(Token(kind, lexeme, SourceSpan(start, i)))
            continue
        if ch.isdigit():
            while i < n and source[i].isdigit():
                i += 1
            tokens.append(Token("int", source[start:i], SourceSpan(start, i)))
            continue
        if ch == "'":
            i += 1
            while i < n and source[i] != "'":
                i += 1
            if i >= n:
                line, col = line_col(source, start)
                raise LexError(f"unterminated string literal at line {line}, col {col}",
                               SourceSpan(start, n))
            i += 1
            tokens.append(Token("string", source[start:i], SourceSpan(start, i)))
            continue
        matched = False
        for op in OPERATORS:
            if source.startswith(op, i):
                i += len(op)
                tokens.append(Token("op", op, SourceSpan(start, i)))
                matched = True
                break
        if matched:
            continue
        single = {".": "dot", ",": "comma", "(": "lparen", ")": "rparen",
                  "*": "star", ";": "semi"}
        if ch in single:
            i += 1
            tokens.append(Token(single[ch], ch, SourceSpan(start, i)))
            continue
        line, col = line_col(source, i)
        raise LexError(f"unexpected character {ch!r} at line {line}, col {col}",
                       SourceSpan(i, i + 1))
    return tokens
