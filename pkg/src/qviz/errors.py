"""Exception hierarchy shared by the whole pipeline.

Every error that originates in query text carries the offending SourceSpan so
front ends (CLI, HTTP service, editor) can point at the exact characters.
"""
from __future__ import annotations

from .spans import SourceSpan


class QvizError(Exception):
    """Base class; `span` is None for errors without a source location."""

    def __init__(self, message: str, span: SourceSpan | None = None):
        super().__init__(message)
        self.message = message
        self.span = span


class LexError(QvizError):
    pass


class ParseError(QvizError):
    def __init__(self, message: str, span: SourceSpan | None = None,
                 expected: tuple[str, ...] = ()):
        super().__init__(message, span)
        self.expected = expected


class UnsupportedFeature(QvizError):
    """Syntactically valid SQL outside the supported subset (OR, GROUP BY, ...)."""

    def __init__(self, feature: str, span: SourceSpan | None = None,
                 message: str | None = None):
        super().__init__(message or f"unsupported SQL feature: {feature}", span)
        self.feature = feature


class ResolveError(QvizError):
    pass


class UnknownRelation(ResolveError):
    pass


class UnknownAttribute(ResolveError):
    pass


class AmbiguousAttribute(ResolveError):
    pass


class SchemaMismatch(QvizError):
    """Database instance lacks a relation or attribute the query references."""


class InvalidDatabase(QvizError):
    """Database instance violates the model (NULL values, ragged tuples)."""


class TypeMismatch(QvizError):
    """Comparison between an integer and a string during evaluation."""


class DepthExceeded(QvizError):
    """Nesting depth beyond what the queryvis dialect renders unambiguously."""

    def __init__(self, depth: int, limit: int):
        super().__init__(
            f"nesting depth {depth} exceeds the queryvis limit of {limit}")
        self.depth = depth
        self.limit = limit


class DisconnectedQuery(QvizError):
    """Join graph has more than one component; queryvis cannot place it."""


class VersionError(QvizError):
    """Interchange document version differs from the supported version."""
