"""Graphviz DOT output.

Table boxes become record nodes with one port per attribute row; quantifier
groups become nested clusters; predicate edges are drawn without direction
(dir=none) while reading arrows keep their arrowheads.
"""
from __future__ import annotations

from ..diagram import Diagram, GroupBox

_RECORD_ESCAPES = str.maketrans({
    "{": r"\{", "}": r"\}", "|": r"\|", "<": r"\<", ">": r"\>", '"': r"\"",
})


def _record_label(node) -> str:
    parts = [node.title.translate(_RECORD_ESCAPES)]
    for row in node.attrRows:
        text = row.text
        if row.constraints:
            text += " " + " ".join(row.constraints)
        parts.append(f"<{row.key}> {text.translate(_RECORD_ESCAPES)}")
    return "{" + "|".join(parts) + "}"


def _group_attrs(g: GroupBox) -> list[str]:
    attrs = []
    if g.style == "not-exists-dashed":
        attrs.append('style="dashed"')
    elif g.style == "forall-double":
        attrs.append('peripheries=2')
    elif g.shade:
        attrs.append('style="filled"')
        attrs.append('fillcolor="#d9d9d9"')
    attrs.append(f'label="{g.kind}"')
    return attrs


def render_dot(diagram: Diagram) -> str:
    lines = ["digraph query {", '  rankdir=LR;', '  node [shape=record, fontsize=12];']

    top_groups = [g for g in diagram.groups if g.parentGroupId is None]
    by_id = {g.id: g for g in diagram.groups}
    grouped_nodes = {nid for g in diagram.groups for nid in g.memberNodeIds}

    def emit_group(g: GroupBox, indent: str) -> None:
        lines.append(f"{indent}subgraph cluster_{g.id} {{")
        for attr in _group_attrs(g):
            lines.append(f"{indent}  {attr};")
        for nid in g.memberNodeIds:
            node = next(n for n in diagram.nodes if n.id == nid)
            lines.append(f'{indent}  {nid} [label="{_record_label(node)}"];')
        for cid in g.childGroupIds:
            emit_group(by_id[cid], indent + "  ")
        lines.append(f"{indent}}}")

    for n in diagram.nodes:
        if n.id not in grouped_nodes:
            lines.append(f'  {n.id} [label="{_record_label(n)}"];')
    for g in top_groups:
        emit_group(g, "  ")

    for e in diagram.edges:
        attrs = ["dir=none"]
        if e.op != "=" and not e.isBinding:
            attrs.append(f'label="{e.op.translate(_RECORD_ESCAPES)}"')
        lines.append(f'  {e.sourceNode}:{e.sourceAttr} -> '
                     f'{e.targetNode}:{e.targetAttr} [{", ".join(attrs)}];')
    for a in diagram.arrows:
        lines.append(f'  {a.sourceNode} -> {a.targetNode} [style=bold];')

    lines.append("}")
    return "\n".join(lines) + "\n"
