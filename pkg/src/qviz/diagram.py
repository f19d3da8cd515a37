"""Dialect-independent diagram model and the two dialect builders.

A diagram is boxes (one per table variable plus one output box titled
SELECT), predicate edges between attribute rows, group boxes for quantifier
scopes, and reading arrows.  The two dialects differ in how scopes are drawn:

* queryvis: not-exists blocks get dashed groups, forall-implies blocks get
  double-border groups, plain exists blocks get no group at all (their tables
  sit inside the nearest enclosing group).  Reading arrows chain the blocks.
  Nesting deeper than three blocks is rejected, as is a query whose join
  graph is disconnected.
* relational-diagrams: only negation scopes are drawn, as solid boxes shaded
  at alternating depths; no forall rewrite, no arrows, any depth and shape
  accepted.  "rd" is accepted as a short alias for the dialect name.
"""
from __future__ import annotations

from dataclasses import dataclass

from .calculus import (
    AttrOperand,
    CalculusQuery,
    ConstOperand,
    QuantifierBlock,
    forall_transform,
    nesting_depth,
    walk_blocks,
)
from .errors import DepthExceeded, DisconnectedQuery
from .spans import SourceSpan

QUERYVIS_MAX_DEPTH = 3


@dataclass(frozen=True)
class AttrRow:
    key: str  # unique within the box; edges address rows by this
    text: str  # display label
    constraints: tuple[str, ...] = ()  # e.g. ("= 'cola'",)


@dataclass(frozen=True)
class TableBox:
    id: str
    varId: int | None  # None for the output box
    title: str  # relation name as written, or "SELECT"
    role: str  # output | input
    attrRows: tuple[AttrRow, ...]
    blockId: int
    groupId: str | None  # innermost enclosing GroupBox, if any
    spanKey: str | None


@dataclass(frozen=True)
class PredicateEdge:
    id: str
    sourceNode: str
    sourceAttr: str
    targetNode: str
    targetAttr: str
    op: str  # "=" for output bindings
    isBinding: bool
    spanKey: str | None


@dataclass(frozen=True)
class GroupBox:
    id: str
    blockId: int
    kind: str  # not-exists | forall-implies
    style: str  # not-exists-dashed | forall-double | negation-solid-shaded
    shade: int  # alternating tint index (relational-diagrams only; 0 otherwise)
    depth: int
    memberNodeIds: tuple[str, ...]
    childGroupIds: tuple[str, ...]
    parentGroupId: str | None
    spanKey: str | None


@dataclass(frozen=True)
class ReadingArrow:
    id: str
    sourceNode: str
    targetNode: str


@dataclass(frozen=True)
class BlockInfo:
    blockId: int
    kind: str
    parentId: int | None
    depth: int
    nodeIds: tuple[str, ...]


@dataclass(frozen=True)
class Diagram:
    dialect: str  # queryvis | relational-diagrams
    nodes: tuple[TableBox, ...]
    edges: tuple[PredicateEdge, ...]
    groups: tuple[GroupBox, ...]
    arrows: tuple[ReadingArrow, ...]
    blocks: tuple[BlockInfo, ...]
    spanMap: dict[str, SourceSpan]
    source: str


def diagram_stats(d: Diagram) -> tuple[int, int, int, int, int]:
    """(node count, edge count, group count, arrow count, max group depth)."""
    depth = max((g.depth for g in d.groups), default=0)
    return (len(d.nodes), len(d.edges), len(d.groups), len(d.arrows), depth)


def _format_constant(c: ConstOperand) -> str:
    return str(c.value) if isinstance(c.value, int) else f"'{c.value}'"


def _check_connected(q: CalculusQuery) -> None:
    """The join graph (SELECT + table vars; binding and var-var predicate
    edges) must be one component."""
    adj: dict[int | str, set[int | str]] = {"select": set()}
    var_names: dict[int, str] = {}
    for b in walk_blocks(q.root):
        for v in b.vars:
            adj.setdefault(v.varId, set())
            var_names[v.varId] = v.alias
        for p in b.predicates:
            if isinstance(p.right, AttrOperand):
                adj.setdefault(p.left.varId, set()).add(p.right.varId)
                adj.setdefault(p.right.varId, set()).add(p.left.varId)
    for o in q.outputs:
        adj["select"].add(o.attr.varId)
        adj.setdefault(o.attr.varId, set()).add("select")

    seen: set[int | str] = set()
    stack: list[int | str] = ["select"]
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        stack.extend(adj[node] - seen)
    missing = sorted(var_names[v] for v in var_names if v not in seen)
    if missing:
        raise DisconnectedQuery(
            "query is not connected to its output; unreachable table "
            f"variable(s): {', '.join(missing)}")


class _Builder:
    def __init__(self, q: CalculusQuery, dialect: str):
        self.q = q
        self.dialect = dialect
        self.rows: dict[str, list[AttrRow]] = {}  # nodeId -> rows under construction
        self.row_index: dict[tuple[str, str], int] = {}

    def node_id(self, var_id: int) -> str:
        return f"n{var_id}"

    def ensure_row(self, node_id: str, key: str, text: str) -> None:
        if (node_id, key) in self.row_index:
            return
        self.row_index[(node_id, key)] = len(self.rows[node_id])
        self.rows[node_id].append(AttrRow(key, text))

    def add_constraint(self, node_id: str, key: str, constraint: str) -> None:
        idx = self.row_index[(node_id, key)]
        row = self.rows[node_id][idx]
        self.rows[node_id][idx] = AttrRow(row.key, row.text,
                                          row.constraints + (constraint,))

    def build(self) -> Diagram:
        q = self.q
        all_blocks = list(walk_blocks(q.root))
        var_block: dict[int, int] = {}
        for b in all_blocks:
            for v in b.vars:
                var_block[v.varId] = b.blockId
        for b in all_blocks:
            for v in b.vars:
                self.rows[self.node_id(v.varId)] = []
        self.rows["nout"] = []

        # output rows first (they appear first in the SQL text), then
        # predicate rows in predicate order
        for o in q.outputs:
            self.ensure_row("nout", f"o{o.index}", o.name)
            self.ensure_row(self.node_id(o.attr.varId), o.attr.attr, o.attr.attr)
        for b in all_blocks:
            for p in b.predicates:
                left_node = self.node_id(p.left.varId)
                self.ensure_row(left_node, p.left.attr, p.left.attr)
                if isinstance(p.right, AttrOperand):
                    self.ensure_row(self.node_id(p.right.varId),
                                    p.right.attr, p.right.attr)
                else:
                    self.add_constraint(left_node, p.left.attr,
                                        f"{p.op} {_format_constant(p.right)}")

        edges: list[PredicateEdge] = []
        for o in q.outputs:
            edges.append(PredicateEdge(
                f"e{len(edges)}", "nout", f"o{o.index}",
                self.node_id(o.attr.varId), o.attr.attr,
                "=", True, f"out:{o.index}"))
        for b in all_blocks:
            for p in b.predicates:
                if isinstance(p.right, ConstOperand):
                    continue
                edges.append(PredicateEdge(
                    f"e{len(edges)}", self.node_id(p.left.varId), p.left.attr,
                    self.node_id(p.right.varId), p.right.attr,
                    p.op, False, f"pred:{p.predId}"))

        # blocks, groups, arrows
        depth_of: dict[int, int] = {}
        parent_of: dict[int, int | None] = {}
        infos: list[BlockInfo] = []

        def walk(b: QuantifierBlock, parent: int | None, depth: int) -> None:
            depth_of[b.blockId] = depth
            parent_of[b.blockId] = parent
            node_ids = tuple(self.node_id(v.varId) for v in b.vars)
            if b.kind == "root":
                node_ids = ("nout",) + node_ids
            infos.append(BlockInfo(b.blockId, b.kind, parent, depth, node_ids))
            for c in b.children:
                walk(c, b.blockId, depth + 1)

        walk(q.root, None, 0)
        block_by_id = {b.blockId: b for b in all_blocks}

        def boxed(block_id: int) -> bool:
            return block_by_id[block_id].kind in ("not-exists", "forall-implies")

        def nearest_boxed(block_id: int) -> int | None:
            cur: int | None = block_id
            while cur is not None and not boxed(cur):
                cur = parent_of[cur]
            return cur

        members: dict[int, list[str]] = {b.blockId: [] for b in all_blocks if boxed(b.blockId)}
        child_groups: dict[int, list[str]] = {bid: [] for bid in members}
        for b in all_blocks:
            owner = nearest_boxed(b.blockId)
            if owner is not None:
                members[owner].extend(self.node_id(v.varId) for v in b.vars)
        for bid in members:
            parent_boxed = nearest_boxed(parent_of[bid]) if parent_of[bid] is not None else None
            if parent_boxed is not None:
                child_groups[parent_boxed].append(f"g{bid}")

        groups: list[GroupBox] = []
        for b in all_blocks:
            if not boxed(b.blockId):
                continue
            if self.dialect == "queryvis":
                style = ("not-exists-dashed" if b.kind == "not-exists"
                         else "forall-double")
                shade = 0
            else:
                style = "negation-solid-shaded"
                shade = depth_of[b.blockId] % 2
            parent_boxed = (nearest_boxed(parent_of[b.blockId])
                            if parent_of[b.blockId] is not None else None)
            groups.append(GroupBox(
                f"g{b.blockId}", b.blockId, b.kind, style, shade,
                depth_of[b.blockId], tuple(members[b.blockId]),
                tuple(child_groups[b.blockId]),
                f"g{parent_boxed}" if parent_boxed is not None else None,
                f"block:{b.blockId}"))

        arrows: list[ReadingArrow] = []
        if self.dialect == "queryvis" and q.root.children:
            def anchor(b: QuantifierBlock) -> str:
                return self.node_id(b.vars[0].varId)

            arrows.append(ReadingArrow("a0", "nout", anchor(q.root)))

            def arrow_walk(b: QuantifierBlock) -> None:
                for c in b.children:
                    arrows.append(ReadingArrow(f"a{len(arrows)}", anchor(b), anchor(c)))
                    arrow_walk(c)

            arrow_walk(q.root)

        def group_of(block_id: int) -> str | None:
            owner = nearest_boxed(block_id)
            return f"g{owner}" if owner is not None else None

        nodes: list[TableBox] = [TableBox(
            "nout", None, "SELECT", "output", tuple(self.rows["nout"]),
            q.root.blockId, None, "select")]
        for b in all_blocks:
            for v in b.vars:
                nid = self.node_id(v.varId)
                nodes.append(TableBox(nid, v.varId, v.relation, "input",
                                      tuple(self.rows[nid]), b.blockId,
                                      group_of(b.blockId), f"var:{v.varId}"))

        return Diagram(self.dialect, tuple(nodes), tuple(edges), tuple(groups),
                       tuple(arrows), tuple(infos), dict(q.spanMap), q.source)


def build_queryvis(q: CalculusQuery, apply_forall: bool = True) -> Diagram:
    """Build the queryvis-dialect diagram.

    Raises DepthExceeded for nesting deeper than three blocks and
    DisconnectedQuery when some table variable has no predicate path to the
    output.
    """
    depth = nesting_depth(q)
    if depth > QUERYVIS_MAX_DEPTH:
        raise DepthExceeded(depth, QUERYVIS_MAX_DEPTH)
    _check_connected(q)
    if apply_forall:
        q = forall_transform(q)
    return _Builder(q, "queryvis").build()


def build_relational_diagram(q: CalculusQuery) -> Diagram:
    """Build the relational-diagrams dialect; accepts any depth and
    disconnected queries, and never applies the forall rewrite."""
    return _Builder(q, "relational-diagrams").build()


def normalize_dialect(dialect: str) -> str:
    """Map the accepted dialect spellings to a canonical name."""
    if dialect in ("queryvis",):
        return "queryvis"
    if dialect in ("rd", "relational-diagrams"):
        return "relational-diagrams"
    raise ValueError(f"unknown dialect {dialect!r}")


def build_diagram(q: CalculusQuery, dialect: str, apply_forall: bool = True) -> Diagram:
    if normalize_dialect(dialect) == "queryvis":
        return build_queryvis(q, apply_forall)
    return build_relational_diagram(q)
