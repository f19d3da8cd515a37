"""Layered layout for diagrams.

Layers grow left to right starting at the output box.  Top-level tables are
layered by breadth-first distance from the output box over the join graph;
each quantifier block enters one layer past the deepest ancestor variable its
local predicates mention, so correlated tables sit next to what they join
with ("block lifting").  Within a layer, vertical order is chosen by
barycenter sweeps over attribute-level edge endpoints with a best-snapshot
and a small adjacent-transposition polish.

All coordinates are integers in abstract pixel units derived from the style
configuration (character width for box widths, row height for box heights).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

from .diagram import Diagram, GroupBox, TableBox
from .errors import DisconnectedQuery
from .style import StyleConfig


@dataclass(frozen=True)
class PlacedNode:
    id: str
    layer: int
    order: int
    x: int
    y: int
    width: int
    height: int
    rowAnchors: dict[str, int]  # row key -> absolute y of the row's center


@dataclass(frozen=True)
class PlacedGroup:
    id: str
    kind: str
    style: str
    shade: int
    depth: int
    x: int
    y: int
    width: int
    height: int


@dataclass(frozen=True)
class Layout:
    nodes: dict[str, PlacedNode]
    groups: tuple[PlacedGroup, ...]
    width: int
    height: int
    layersOf: dict[str, int]
    orders: tuple[tuple[str, ...], ...]
    crossings: int


# -- layer assignment --------------------------------------------------------


def _join_adjacency(d: Diagram) -> dict[str, set[str]]:
    adj: dict[str, set[str]] = {n.id: set() for n in d.nodes}
    for e in d.edges:
        adj[e.sourceNode].add(e.targetNode)
        adj[e.targetNode].add(e.sourceNode)
    return adj


def assign_layers(d: Diagram) -> dict[str, int]:
    """Layer per node id.  The output box is layer 0."""
    block_of = {}
    for info in d.blocks:
        for nid in info.nodeIds:
            block_of[nid] = info.blockId
    info_by_id = {info.blockId: info for info in d.blocks}
    children: dict[int, list[int]] = {info.blockId: [] for info in d.blocks}
    for info in d.blocks:
        if info.parentId is not None:
            children[info.parentId].append(info.blockId)
    root_id = next(info.blockId for info in d.blocks if info.parentId is None)

    local_edges: dict[int, list[tuple[str, str]]] = {info.blockId: [] for info in d.blocks}
    cross_edges: dict[int, list[tuple[str, str]]] = {info.blockId: [] for info in d.blocks}
    for e in d.edges:
        # an edge belongs to the deeper endpoint's block
        bs, bt = block_of[e.sourceNode], block_of[e.targetNode]
        owner = bs if info_by_id[bs].depth >= info_by_id[bt].depth else bt
        if bs == bt:
            local_edges[owner].append((e.sourceNode, e.targetNode))
        else:
            cross_edges[owner].append((e.sourceNode, e.targetNode))

    layers: dict[str, int] = {}

    def bfs(nodes: list[str], seeds: list[tuple[str, int]],
            edges: list[tuple[str, str]]) -> None:
        adj: dict[str, list[str]] = {n: [] for n in nodes}
        for a, b in edges:
            if a in adj and b in adj:
                adj[a].append(b)
                adj[b].append(a)
        frontier = sorted(set(seeds), key=lambda sv: sv[1])
        queue = [sv for sv in frontier]
        for n, lv in queue:
            if n not in layers:
                layers[n] = lv
        i = 0
        while i < len(queue):
            n, lv = queue[i]
            i += 1
            if layers[n] != lv:
                continue
            for m in adj[n]:
                if m not in layers:
                    layers[m] = lv + 1
                    queue.append((m, lv + 1))

    def place_block(block_id: int) -> None:
        info = info_by_id[block_id]
        nodes = [nid for nid in info.nodeIds]
        if block_id == root_id:
            layers["nout"] = 0
            bfs(nodes, [("nout", 0)], local_edges[block_id])
            entry = 1
        else:
            anchors = []
            seeds: list[tuple[str, int]] = []
            for a, b in cross_edges[block_id]:
                inner, outer = (a, b) if a in nodes else (b, a)
                if outer in layers:
                    anchors.append(layers[outer])
            if anchors:
                entry = 1 + max(anchors)
            else:
                ancestor_nodes: list[str] = []
                cur = info.parentId
                while cur is not None:
                    ancestor_nodes.extend(info_by_id[cur].nodeIds)
                    cur = info_by_id[cur].parentId
                entry = 1 + max((layers[n] for n in ancestor_nodes if n in layers),
                                default=0)
            for a, b in cross_edges[block_id]:
                inner = a if a in nodes else b
                seeds.append((inner, entry))
            if not seeds and nodes:
                seeds.append((nodes[0], entry))
            bfs(nodes, seeds, local_edges[block_id])
        for nid in nodes:
            layers.setdefault(nid, entry)
        for child in children[block_id]:
            place_block(child)

    place_block(root_id)

    # outward push: long edges pull their shallow endpoint outward, but the
    # output box and anything directly bound to it stay put
    pinned = {"nout"}
    for e in d.edges:
        if e.sourceNode == "nout":
            pinned.add(e.targetNode)
        if e.targetNode == "nout":
            pinned.add(e.sourceNode)
    for _ in range(3 * len(layers)):
        pushes: set[str] = set()
        for e in d.edges:
            a, b = e.sourceNode, e.targetNode
            if abs(layers[a] - layers[b]) < 2:
                continue
            shallow = a if layers[a] < layers[b] else b
            if shallow not in pinned:
                pushes.add(shallow)
        if not pushes:
            break
        for n in sorted(pushes):
            layers[n] += 1

    # disconnected diagrams: queryvis refuses them; relational-diagrams puts
    # each extra component in its own band of layers after the SELECT one
    comps = _components(d)
    if len(comps) > 1:
        if d.dialect == "queryvis":
            titles = sorted(
                {n.title for n in d.nodes if n.id in set().union(*comps[1:])})
            raise DisconnectedQuery(
                "query is not connected to its output; unreachable "
                f"table(s): {', '.join(titles)}")
        next_start = max(layers[x] for x in comps[0]) + 1
        for comp in comps[1:]:
            lo = min(layers[x] for x in comp)
            for x in comp:
                layers[x] = next_start + layers[x] - lo
            next_start = max(layers[x] for x in comp) + 1

    # compact away empty layers
    used = sorted(set(layers.values()))
    remap = {lv: i for i, lv in enumerate(used)}
    return {n: remap[lv] for n, lv in layers.items()}


def _components(d: Diagram) -> list[set[str]]:
    """Connected components of the join graph, the SELECT box's first."""
    adj = _join_adjacency(d)
    comps: list[set[str]] = []
    seen: set[str] = set()
    for n in d.nodes:
        if n.id in seen:
            continue
        comp: set[str] = set()
        stack = [n.id]
        while stack:
            cur = stack.pop()
            if cur in comp:
                continue
            comp.add(cur)
            stack.extend(adj[cur] - comp)
        seen |= comp
        comps.append(comp)
    return comps


# -- vertical ordering -------------------------------------------------------


def _row_frac(node: TableBox, key: str) -> float:
    keys = [r.key for r in node.attrRows]
    idx = keys.index(key) if key in keys else 0
    return (idx + 1) / (len(node.attrRows) + 1) if node.attrRows else 0.5


def count_crossings(d: Diagram, layers: dict[str, int],
                    orders: list[list[str]]) -> int:
    """Crossings between edges whose endpoints sit on adjacent layers,
    measured at attribute-row precision."""
    node_by_id = {n.id: n for n in d.nodes}
    pos = {nid: i for order in orders for i, nid in enumerate(order)}
    total = 0
    for li in range(len(orders) - 1):
        pts: list[tuple[float, float]] = []
        for e in d.edges:
            la, lb = layers[e.sourceNode], layers[e.targetNode]
            if {la, lb} != {li, li + 1} or la == lb:
                continue
            if la == li:
                left, lk, right, rk = e.sourceNode, e.sourceAttr, e.targetNode, e.targetAttr
            else:
                left, lk, right, rk = e.targetNode, e.targetAttr, e.sourceNode, e.sourceAttr
            pts.append((pos[left] + _row_frac(node_by_id[left], lk),
                        pos[right] + _row_frac(node_by_id[right], rk)))
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if (pts[i][0] - pts[j][0]) * (pts[i][1] - pts[j][1]) < 0:
                    total += 1
    return total


def _source_ranks(d: Diagram) -> dict[str, int]:
    """Node id -> rank by the start of the node's source span; used to break
    barycenter ties deterministically."""
    def start(n: TableBox) -> int:
        if n.spanKey and n.spanKey in d.spanMap:
            return d.spanMap[n.spanKey].start
        return -1
    ordered = sorted(d.nodes, key=lambda n: (start(n), n.id))
    return {n.id: i for i, n in enumerate(ordered)}


def _sweep(d: Diagram, layers: dict[str, int], orders: list[list[str]],
           layer: int, fixed: int, src_rank: dict[str, int]) -> list[str]:
    node_by_id = {n.id: n for n in d.nodes}
    fixed_pos = {nid: i for i, nid in enumerate(orders[fixed])}
    keys: dict[str, list[float]] = {nid: [] for nid in orders[layer]}
    for e in d.edges:
        la, lb = layers[e.sourceNode], layers[e.targetNode]
        if {la, lb} != {layer, fixed} or la == lb:
            continue
        if la == layer:
            mine, other, ok = e.sourceNode, e.targetNode, e.targetAttr
        else:
            mine, other, ok = e.targetNode, e.sourceNode, e.sourceAttr
        keys[mine].append(fixed_pos[other] + _row_frac(node_by_id[other], ok))
    cur = {nid: i for i, nid in enumerate(orders[layer])}
    return sorted(orders[layer],
                  key=lambda nid: (sum(keys[nid]) / len(keys[nid]) if keys[nid]
                                   else float(cur[nid]), src_rank[nid]))


def _polish(d: Diagram, layers: dict[str, int], orders: list[list[str]],
            paths: dict[str, tuple[str, ...]]) -> tuple[list[list[str]], int]:
    best = count_crossings(d, layers, orders)
    for _ in range(2):
        improved = False
        for li, order in enumerate(orders):
            for i in range(len(order) - 1):
                # only same-scope swaps; anything else could split a group
                if paths[order[i]] != paths[order[i + 1]]:
                    continue
                order[i], order[i + 1] = order[i + 1], order[i]
                c = count_crossings(d, layers, orders)
                if c < best:
                    best = c
                    improved = True
                else:
                    order[i], order[i + 1] = order[i + 1], order[i]
        if not improved:
            break
    return orders, best


def _contiguity_ok(order: list[str], paths: dict[str, tuple[str, ...]]) -> bool:
    pos = {nid: i for i, nid in enumerate(order)}
    prefixes = {paths[nid][:k] for nid in order
                for k in range(1, len(paths[nid]) + 1)}
    for prefix in prefixes:
        spots = sorted(pos[nid] for nid in order
                       if paths[nid][:len(prefix)] == prefix)
        if spots and spots[-1] - spots[0] + 1 != len(spots):
            return False
    return True


def _descend_small_layers(d: Diagram, layers: dict[str, int],
                          orders: list[list[str]],
                          paths: dict[str, tuple[str, ...]]) -> tuple[list[list[str]], int]:
    """Exhaustive descent over single layers of up to six nodes, then over
    adjacent layer pairs with a bounded permutation product.

    Layers this small are the common case for desk-scale queries, and trying
    every scope-respecting permutation (neighbors fixed) is cheaper than a
    smarter heuristic.  The pair pass catches orderings the sweeps miss when
    two layers have to move together.  Only strict improvements are taken, so
    the result stays deterministic and never regresses."""
    def valid_perms(bucket: list[str]) -> list[list[str]]:
        return [list(p) for p in permutations(sorted(bucket))
                if _contiguity_ok(list(p), paths)]

    fact = [1, 1, 2, 6, 24, 120, 720]
    best = count_crossings(d, layers, orders)
    for _ in range(2):
        improved = False
        for li in range(len(orders)):
            if not 1 < len(orders[li]) <= 6:
                continue
            current = orders[li]
            for cand in valid_perms(current):
                if cand == current:
                    continue
                orders[li] = cand
                c = count_crossings(d, layers, orders)
                if c < best:
                    best = c
                    current = cand
                    improved = True
            orders[li] = current
        for li in range(len(orders) - 1):
            a, b = orders[li], orders[li + 1]
            if max(len(a), len(b)) > 6 or fact[len(a)] * fact[len(b)] > 20000:
                continue
            cur_a, cur_b = a, b
            for pa in valid_perms(a):
                for pb in valid_perms(b):
                    if pa == cur_a and pb == cur_b:
                        continue
                    orders[li], orders[li + 1] = pa, pb
                    c = count_crossings(d, layers, orders)
                    if c < best:
                        best = c
                        cur_a, cur_b = pa, pb
                        improved = True
            orders[li], orders[li + 1] = cur_a, cur_b
        if not improved:
            break
    return orders, best


def _group_paths(d: Diagram) -> dict[str, tuple[str, ...]]:
    """Node id -> chain of group ids from outermost to innermost."""
    by_id = {g.id: g for g in d.groups}
    innermost: dict[str, str] = {}
    for g in d.groups:
        for nid in g.memberNodeIds:
            innermost[nid] = g.id
    paths: dict[str, tuple[str, ...]] = {}
    for n in d.nodes:
        chain: list[str] = []
        gid = innermost.get(n.id)
        while gid is not None:
            chain.append(gid)
            gid = by_id[gid].parentGroupId
        paths[n.id] = tuple(reversed(chain))
    return paths


def _fix_group_contiguity(d: Diagram, orders: list[list[str]],
                          paths: dict[str, tuple[str, ...]]) -> list[list[str]]:
    """Keep each group's nodes adjacent within every layer (otherwise the
    group rectangle would visually capture foreign tables)."""
    fixed: list[list[str]] = []
    for order in orders:
        pos = {nid: i for i, nid in enumerate(order)}
        prefixes = {paths[nid][:k] for nid in order for k in range(1, len(paths[nid]) + 1)}
        violated = False
        for prefix in prefixes:
            spots = sorted(pos[nid] for nid in order if paths[nid][:len(prefix)] == prefix)
            if spots and spots[-1] - spots[0] + 1 != len(spots):
                violated = True
        if not violated:
            fixed.append(order)
            continue
        first: dict[tuple[str, ...], int] = {}
        for prefix in prefixes:
            first[prefix] = min(pos[nid] for nid in order
                                if paths[nid][:len(prefix)] == prefix)

        def key(nid: str):
            # chain of group first-positions, then the node's own position,
            # so each scope gathers at the spot its topmost member held
            p = paths[nid]
            return tuple(first[p[:k]] for k in range(1, len(p) + 1)) + (pos[nid],)

        fixed.append(sorted(order, key=key))
    return fixed


def order_nodes(d: Diagram, layers: dict[str, int]) -> tuple[list[list[str]], int]:
    """Barycenter ordering with best-snapshot; returns (orders, crossings)."""
    n_layers = max(layers.values()) + 1 if layers else 0
    orders: list[list[str]] = [[] for _ in range(n_layers)]
    for n in d.nodes:  # source order within each layer to start
        orders[layers[n.id]].append(n.id)

    src_rank = _source_ranks(d)
    paths = _group_paths(d)
    best = _fix_group_contiguity(d, [list(o) for o in orders], paths)
    best_c = count_crossings(d, layers, best)
    for sweep in range(8):
        before = [list(o) for o in orders]
        if sweep % 2 == 0:
            for li in range(1, n_layers):
                orders[li] = _sweep(d, layers, orders, li, li - 1, src_rank)
        else:
            for li in range(n_layers - 2, -1, -1):
                orders[li] = _sweep(d, layers, orders, li, li + 1, src_rank)
        candidate = _fix_group_contiguity(d, [list(o) for o in orders], paths)
        c = count_crossings(d, layers, candidate)
        if c < best_c:
            best_c = c
            best = candidate
        if orders == before:  # fixpoint, more sweeps cannot improve
            break
    best, best_c = _polish(d, layers, best, paths)
    best, best_c = _descend_small_layers(d, layers, best, paths)
    return best, best_c


# -- coordinates -------------------------------------------------------------


def _node_size(n: TableBox, style: StyleConfig) -> tuple[int, int]:
    texts = [n.title]
    for r in n.attrRows:
        suffix = (" " + " ".join(r.constraints)) if r.constraints else ""
        texts.append(r.text + suffix)
    width = max(len(t) for t in texts) * style.charWidth + 2 * style.boxPaddingX
    height = (1 + len(n.attrRows)) * style.rowHeight
    return max(width, style.minBoxWidth), height


def layout(d: Diagram, style: StyleConfig | None = None) -> Layout:
    """Compute the full layout: layers, vertical order, and coordinates."""
    style = style or StyleConfig()
    layers = assign_layers(d)
    orders, crossings = order_nodes(d, layers)
    node_by_id = {n.id: n for n in d.nodes}
    paths = _group_paths(d)

    sizes = {n.id: _node_size(n, style) for n in d.nodes}
    layer_widths = [max((sizes[nid][0] for nid in order), default=0)
                    for order in orders]

    placed: dict[str, PlacedNode] = {}
    x_cursor = style.margin
    for li, order in enumerate(orders):
        # headroom for group borders around the column
        max_depth = max((len(paths[nid]) for nid in order), default=0)
        y_cursor = style.margin + max_depth * style.groupPadding
        prev_path: tuple[str, ...] | None = None
        for oi, nid in enumerate(order):
            w, h = sizes[nid]
            if prev_path is not None and paths[nid] != prev_path:
                y_cursor += 2 * style.groupPadding
            x = x_cursor + (layer_widths[li] - w) // 2
            anchors = {}
            for ri, row in enumerate(node_by_id[nid].attrRows):
                anchors[row.key] = y_cursor + (ri + 1) * style.rowHeight + style.rowHeight // 2
            placed[nid] = PlacedNode(nid, li, oi, x, y_cursor, w, h, anchors)
            y_cursor += h + style.nodeGap
            prev_path = paths[nid]
        x_cursor += layer_widths[li] + style.layerGap

    # group rectangles, innermost first so parents wrap children
    group_rects: dict[str, tuple[int, int, int, int]] = {}
    for g in sorted(d.groups, key=lambda g: -g.depth):
        xs: list[int] = []
        ys: list[int] = []
        x2s: list[int] = []
        y2s: list[int] = []
        for nid in g.memberNodeIds:
            p = placed[nid]
            xs.append(p.x)
            ys.append(p.y)
            x2s.append(p.x + p.width)
            y2s.append(p.y + p.height)
        for cid in g.childGroupIds:
            cx, cy, cw, ch = group_rects[cid]
            xs.append(cx)
            ys.append(cy)
            x2s.append(cx + cw)
            y2s.append(cy + ch)
        pad = style.groupPadding
        if not xs:
            continue
        x1, y1 = min(xs) - pad, min(ys) - pad
        x2, y2 = max(x2s) + pad, max(y2s) + pad
        group_rects[g.id] = (x1, y1, x2 - x1, y2 - y1)

    placed_groups = tuple(
        PlacedGroup(g.id, g.kind, g.style, g.shade, g.depth, *group_rects[g.id])
        for g in sorted(d.groups, key=lambda g: g.depth) if g.id in group_rects)

    right = max([p.x + p.width for p in placed.values()]
                + [r[0] + r[2] for r in group_rects.values()], default=0)
    bottom = max([p.y + p.height for p in placed.values()]
                 + [r[1] + r[3] for r in group_rects.values()], default=0)

    return Layout(placed, placed_groups, right + style.margin,
                  bottom + style.margin, layers,
                  tuple(tuple(o) for o in orders), crossings)
