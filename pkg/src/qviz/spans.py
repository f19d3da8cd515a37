"""Byte-offset source spans attached to every syntax and diagram element."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class SourceSpan:
    """Half-open [start, end) byte range into the original query text."""

    start: int
    end: int

    def __post_init__(self) -> None:
        if not (0 <= self.start <= self.end):
            raise ValueError(f"invalid span [{self.start}, {self.end})")

    def slice(self, source: str) -> str:
        return source[self.start : self.end]

    def merge(self, other: SourceSpan) -> SourceSpan:
        return SourceSpan(min(self.start, other.start), max(self.end, other.end))

    def contains(self, offset: int) -> bool:
        return self.start <= offset < self.end


def line_col(source: str, offset: int) -> tuple[int, int]:
    """1-based (line, column) of a byte offset, for error messages."""
    prefix = source[:offset]
    line = prefix.count("\n") + 1
    last_nl = prefix.rfind("\n")
    col = offset - last_nl if last_nl >= 0 else offset + 1
    return line, col
