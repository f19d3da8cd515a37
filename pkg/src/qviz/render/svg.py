"""Deterministic SVG rendering.

Every diagram element becomes an SVG group with a stable id and, when the
element maps back to query text, data-span-start/data-span-end attributes
holding the character range.  Equal inputs produce byte-identical output.
"""
from __future__ import annotations

from xml.sax.saxutils import escape, quoteattr

from ..diagram import Diagram
from ..layout import Layout, PlacedNode
from ..layout import layout as compute_layout
from ..style import StyleConfig


def _span_attrs(diagram: Diagram, span_key: str | None) -> str:
    if span_key is None or span_key not in diagram.spanMap:
        return ""
    span = diagram.spanMap[span_key]
    return f' data-span-start="{span.start}" data-span-end="{span.end}"'


def _row_text(row) -> str:
    if row.constraints:
        return row.text + " " + " ".join(row.constraints)
    return row.text


def _anchor_sides(a: PlacedNode, b: PlacedNode, ay: int, by: int) -> tuple[int, int, int, int]:
    """Pick the facing box edges for an edge from a-row to b-row."""
    if a.x + a.width < b.x:
        return a.x + a.width, ay, b.x, by
    if b.x + b.width < a.x:
        return a.x, ay, b.x + b.width, by
    # same column: leave from the right edge of both
    return a.x + a.width, ay, b.x + b.width, by


class _Svg:
    def __init__(self) -> None:
        self.lines: list[str] = []

    def add(self, line: str) -> None:
        self.lines.append(line)

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def render_svg(diagram: Diagram, lay: Layout | None = None,
               style: StyleConfig | None = None) -> str:
    style = style or StyleConfig()
    if lay is None:
        lay = compute_layout(diagram, style)
    s = _Svg()
    font = quoteattr(style.fontFamily)
    s.add(f'<svg xmlns="http://www.w3.org/2000/svg" width="{lay.width}" '
          f'height="{lay.height}" viewBox="0 0 {lay.width} {lay.height}" '
          f'font-family={font} font-size="{style.fontSize}">')
    s.add('<defs>')
    s.add('<marker id="arrowhead" markerWidth="10" markerHeight="8" refX="9" '
          'refY="4" orient="auto"><path d="M0,0 L10,4 L0,8 z" fill="#333"/></marker>')
    s.add('</defs>')
    s.add(f'<rect x="0" y="0" width="{lay.width}" height="{lay.height}" fill="white"/>')

    for g in lay.groups:  # outermost first; Layout sorts by depth
        dg = next(d for d in diagram.groups if d.id == g.id)
        # alternating tints: inner boxes repaint over their parent, so the
        # even-depth tint must be opaque white, not transparent
        fill = "#d9d9d9" if g.shade else "white"
        common = (f'x="{g.x}" y="{g.y}" width="{g.width}" height="{g.height}" '
                  f'fill="{fill}" stroke="#444" stroke-width="1.5"')
        s.add(f'<g id="{g.id}" class="group group-{g.style}"'
              f'{_span_attrs(diagram, dg.spanKey)}>')
        if g.style == "not-exists-dashed":
            s.add(f'<rect {common} stroke-dasharray="6 4"/>')
        elif g.style == "forall-double":
            s.add(f'<rect {common}/>')
            s.add(f'<rect x="{g.x + 3}" y="{g.y + 3}" width="{g.width - 6}" '
                  f'height="{g.height - 6}" fill="none" stroke="#444" '
                  f'stroke-width="1.5"/>')
        else:
            s.add(f'<rect {common}/>')
        s.add('</g>')

    node_place = lay.nodes
    for n in diagram.nodes:
        p = node_place[n.id]
        s.add(f'<g id="{n.id}" class="node"{_span_attrs(diagram, n.spanKey)}>')
        s.add(f'<rect x="{p.x}" y="{p.y}" width="{p.width}" height="{p.height}" '
              f'fill="white" stroke="#222" stroke-width="1.5"/>')
        title_y = p.y + style.rowHeight - style.rowHeight // 4
        s.add(f'<text x="{p.x + p.width // 2}" y="{title_y}" '
              f'text-anchor="middle" font-weight="bold">{escape(n.title)}</text>')
        if n.attrRows:
            sep_y = p.y + style.rowHeight
            s.add(f'<line x1="{p.x}" y1="{sep_y}" x2="{p.x + p.width}" '
                  f'y2="{sep_y}" stroke="#222"/>')
        for ri, row in enumerate(n.attrRows):
            row_y = p.y + (ri + 2) * style.rowHeight - style.rowHeight // 4
            s.add(f'<text x="{p.x + style.boxPaddingX}" y="{row_y}">'
                  f'{escape(_row_text(row))}</text>')
        s.add('</g>')

    for e in diagram.edges:
        a, b = node_place[e.sourceNode], node_place[e.targetNode]
        ay = a.rowAnchors[e.sourceAttr]
        by = b.rowAnchors[e.targetAttr]
        x1, y1, x2, y2 = _anchor_sides(a, b, ay, by)
        cls = "edge edge-binding" if e.isBinding else "edge"
        s.add(f'<g id="{e.id}" class="{cls}"{_span_attrs(diagram, e.spanKey)}>')
        if a.layer == b.layer:
            bulge = max(x1, x2) + 24
            s.add(f'<path d="M{x1},{y1} C{bulge},{y1} {bulge},{y2} {x2},{y2}" '
                  f'fill="none" stroke="#333" stroke-width="1.2"/>')
            lx, ly = bulge, (y1 + y2) // 2
        else:
            s.add(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
                  f'stroke="#333" stroke-width="1.2"/>')
            lx, ly = (x1 + x2) // 2, (y1 + y2) // 2
        if e.op != "=" and not e.isBinding:
            s.add(f'<text x="{lx}" y="{ly - 4}" text-anchor="middle" '
                  f'class="edge-label">{escape(e.op)}</text>')
        s.add('</g>')

    for arrow in diagram.arrows:
        a, b = node_place[arrow.sourceNode], node_place[arrow.targetNode]
        ay = a.y + style.rowHeight // 2
        by = b.y + style.rowHeight // 2
        x1, y1, x2, y2 = _anchor_sides(a, b, ay, by)
        s.add(f'<g id="{arrow.id}" class="arrow">')
        s.add(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#333" '
              f'stroke-width="2" marker-end="url(#arrowhead)"/>')
        s.add('</g>')

    s.add('</svg>')
    return s.text()
