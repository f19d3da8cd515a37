"""qviz: compile SQL queries into query-pattern diagrams.

The pipeline is parse -> resolve -> lower; the resulting calculus query can
be evaluated over small databases, hashed into a pattern identity, or built
into a diagram (dialects: queryvis, relational-diagrams), laid out, and
rendered.
"""
from __future__ import annotations

__version__ = "0.1.0"

from .calculus import CalculusQuery, forall_transform, lower, nesting_depth
from .diagram import (
    build_diagram,
    build_queryvis,
    build_relational_diagram,
    diagram_stats,
)
from .errors import QvizError
from .evaluate import Database, evaluate, load_database
from .layout import layout
from .parser import parse
from .pattern import canonical_form, cluster_queries, pattern_hash
from .render import (
    StyleConfig,
    from_interchange,
    render_dot,
    render_svg,
    to_interchange,
)
from .resolver import resolve
from .sqlast import Schema, print_sql


def compile_sql(sql: str, schema: Schema | None = None) -> CalculusQuery:
    """Parse, resolve, and lower in one step."""
    return lower(resolve(parse(sql), schema, source=sql))


__all__ = [
    "CalculusQuery",
    "Database",
    "QvizError",
    "Schema",
    "StyleConfig",
    "__version__",
    "build_diagram",
    "build_queryvis",
    "build_relational_diagram",
    "canonical_form",
    "cluster_queries",
    "compile_sql",
    "diagram_stats",
    "evaluate",
    "forall_transform",
    "from_interchange",
    "layout",
    "load_database",
    "lower",
    "nesting_depth",
    "parse",
    "pattern_hash",
    "print_sql",
    "render_dot",
    "render_svg",
    "resolve",
    "to_interchange",
]
