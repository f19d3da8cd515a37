"""Renderers: SVG, DOT, and the JSON interchange format."""
from ..style import StyleConfig
from .dot import render_dot
from .interchange import INTERCHANGE_VERSION, from_interchange, to_interchange
from .svg import render_svg

__all__ = [
    "INTERCHANGE_VERSION",
    "StyleConfig",
    "from_interchange",
    "render_dot",
    "render_svg",
    "to_interchange",
]
