"""Versioned JSON interchange for diagrams.

`to_interchange` flattens a Diagram plus its Layout into plain JSON data;
`from_interchange` rebuilds both.  The round trip is exact:
to_interchange(*from_interchange(doc)) == doc for any document produced by
this module.  Documents carry a version string; anything but the current
version is rejected with VersionError.
"""
from __future__ import annotations

from ..diagram import (
    AttrRow,
    BlockInfo,
    Diagram,
    GroupBox,
    PredicateEdge,
    ReadingArrow,
    TableBox,
    diagram_stats,
)
from ..errors import VersionError
from ..layout import Layout, PlacedGroup, PlacedNode
from ..spans import SourceSpan

INTERCHANGE_VERSION = "1"


def to_interchange(diagram: Diagram, lay: Layout) -> dict:
    nodes = []
    for n in diagram.nodes:
        p = lay.nodes[n.id]
        nodes.append({
            "id": n.id,
            "varId": n.varId,
            "title": n.title,
            "role": n.role,
            "attrRows": [{"key": r.key, "text": r.text,
                          "constraints": list(r.constraints)} for r in n.attrRows],
            "blockId": n.blockId,
            "groupId": n.groupId,
            "spanKey": n.spanKey,
            "layer": p.layer,
            "order": p.order,
            "x": p.x, "y": p.y, "width": p.width, "height": p.height,
            "rowAnchors": dict(p.rowAnchors),
        })
    edges = [{
        "id": e.id,
        "source": {"node": e.sourceNode, "attr": e.sourceAttr},
        "target": {"node": e.targetNode, "attr": e.targetAttr},
        "op": e.op,
        "binding": e.isBinding,
        "spanKey": e.spanKey,
    } for e in diagram.edges]
    placed_group = {g.id: g for g in lay.groups}
    groups = []
    for g in diagram.groups:
        p = placed_group[g.id]
        groups.append({
            "id": g.id,
            "blockId": g.blockId,
            "kind": g.kind,
            "style": g.style,
            "shade": g.shade,
            "depth": g.depth,
            "members": list(g.memberNodeIds),
            "children": list(g.childGroupIds),
            "parent": g.parentGroupId,
            "spanKey": g.spanKey,
            "x": p.x, "y": p.y, "width": p.width, "height": p.height,
        })
    arrows = [{"id": a.id, "source": a.sourceNode, "target": a.targetNode}
              for a in diagram.arrows]
    blocks = [{"id": b.blockId, "kind": b.kind, "parent": b.parentId,
               "depth": b.depth, "nodes": list(b.nodeIds)} for b in diagram.blocks]
    stats = diagram_stats(diagram)
    return {
        "version": INTERCHANGE_VERSION,
        "dialect": diagram.dialect,
        "source": diagram.source,
        "width": lay.width,
        "height": lay.height,
        "crossings": lay.crossings,
        "nodes": nodes,
        "edges": edges,
        "groups": groups,
        "arrows": arrows,
        "blocks": blocks,
        "spans": {k: [v.start, v.end] for k, v in diagram.spanMap.items()},
        "stats": {"nodes": stats[0], "edges": stats[1], "groups": stats[2],
                  "arrows": stats[3], "maxGroupDepth": stats[4]},
    }


def _require(doc: dict, key: str):
    if key not in doc:
        raise VersionError(f"interchange document is missing {key!r}")
    return doc[key]


def from_interchange(doc: dict) -> tuple[Diagram, Layout]:
    if not isinstance(doc, dict):
        raise VersionError("interchange document must be a JSON object")
    version = doc.get("version")
    if version != INTERCHANGE_VERSION:
        raise VersionError(
            f"unsupported interchange version {version!r}; "
            f"expected {INTERCHANGE_VERSION!r}")

    nodes = []
    placed_nodes: dict[str, PlacedNode] = {}
    layers_of: dict[str, int] = {}
    for n in _require(doc, "nodes"):
        rows = tuple(AttrRow(r["key"], r["text"], tuple(r["constraints"]))
                     for r in n["attrRows"])
        nodes.append(TableBox(n["id"], n["varId"], n["title"], n["role"],
                              rows, n["blockId"], n["groupId"], n["spanKey"]))
        placed_nodes[n["id"]] = PlacedNode(
            n["id"], n["layer"], n["order"], n["x"], n["y"],
            n["width"], n["height"],
            {k: v for k, v in n["rowAnchors"].items()})
        layers_of[n["id"]] = n["layer"]

    edges = tuple(PredicateEdge(
        e["id"], e["source"]["node"], e["source"]["attr"],
        e["target"]["node"], e["target"]["attr"], e["op"], e["binding"],
        e["spanKey"]) for e in _require(doc, "edges"))

    groups = []
    placed_groups = []
    for g in _require(doc, "groups"):
        groups.append(GroupBox(
            g["id"], g["blockId"], g["kind"], g["style"], g["shade"],
            g["depth"], tuple(g["members"]), tuple(g["children"]),
            g["parent"], g["spanKey"]))
        placed_groups.append(PlacedGroup(
            g["id"], g["kind"], g["style"], g["shade"], g["depth"],
            g["x"], g["y"], g["width"], g["height"]))

    arrows = tuple(ReadingArrow(a["id"], a["source"], a["target"])
                   for a in _require(doc, "arrows"))
    blocks = tuple(BlockInfo(b["id"], b["kind"], b["parent"], b["depth"],
                             tuple(b["nodes"])) for b in _require(doc, "blocks"))
    spans = {k: SourceSpan(v[0], v[1]) for k, v in _require(doc, "spans").items()}

    diagram = Diagram(_require(doc, "dialect"), tuple(nodes), edges,
                      tuple(groups), arrows, blocks, spans,
                      _require(doc, "source"))

    n_layers = max(layers_of.values()) + 1 if layers_of else 0
    order_lists: list[list[str]] = [[] for _ in range(n_layers)]
    for nid, p in placed_nodes.items():
        order_lists[p.layer].append(nid)
    for lst in order_lists:
        lst.sort(key=lambda nid: placed_nodes[nid].order)
    placed_groups.sort(key=lambda g: g.depth)

    lay = Layout(placed_nodes, tuple(placed_groups), _require(doc, "width"),
                 _require(doc, "height"), layers_of,
                 tuple(tuple(o) for o in order_lists),
                 _require(doc, "crossings"))
    return diagram, lay
