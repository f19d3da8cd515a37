from __future__ import annotations

import pytest

from qviz.calculus import (
    AttrOperand,
    CalculusQuery,
    ConstOperand,
    QuantifierBlock,
    all_vars,
    forall_transform,
    lower,
    nesting_depth,
    walk_blocks,
)
from qviz.parser import parse
from qviz.resolver import resolve

from corpus import pattern_corpus


def analyze(sql, schema=None):
    return lower(resolve(parse(sql), schema, source=sql))


def block_shape(b: QuantifierBlock):
    """Structure of a block tree with spans and counters stripped."""
    preds = tuple(
        (p.left.varId, p.left.attr, p.op,
         (p.right.varId, p.right.attr) if isinstance(p.right, AttrOperand)
         else ("const", p.right.value))
        for p in b.predicates)
    vars_ = tuple((v.varId, v.relation.lower(), v.alias) for v in b.vars)
    return (b.kind, vars_, preds, tuple(block_shape(c) for c in b.children))


# lowering structure


def test_qsome_is_a_single_root_block(qsome_sql):
    q = analyze(qsome_sql)
    assert q.root.kind == "root"
    assert q.root.children == ()
    assert [v.alias for v in q.root.vars] == ["f", "l", "s"]
    assert [p.op for p in q.root.predicates] == ["=", "=", "="]
    assert q.distinct
    assert [o.name for o in q.outputs] == ["person"]


def test_block_ids_are_preorder(unique_taste_sql):
    q = analyze(unique_taste_sql)
    ids = [b.blockId for b in walk_blocks(q.root)]
    assert ids == list(range(len(ids)))


def test_pred_ids_follow_source_order(qonly_sql):
    q = analyze(qonly_sql)
    preds = [p for b in walk_blocks(q.root) for p in b.predicates]
    assert [p.predId for p in sorted(preds, key=lambda p: p.span.start)] == [
        p.predId for p in preds]


def test_var_ids_follow_source_order(unique_taste_sql):
    q = analyze(unique_taste_sql)
    vs = all_vars(q)
    assert [v.varId for v in vs] == list(range(len(vs)))
    assert sorted(vs, key=lambda v: v.span.start) == vs


def test_qonly_nesting(qonly_sql):
    q = analyze(qonly_sql)
    assert q.root.kind == "root"
    (serves,) = q.root.children
    assert serves.kind == "not-exists"
    (likes,) = serves.children
    assert likes.kind == "not-exists"
    assert likes.children == ()


# IN collapse


def test_not_in_collapses_to_not_exists(antijoin_in_sql, antijoin_schema):
    q = analyze(antijoin_in_sql, antijoin_schema)
    (child,) = q.root.children
    assert child.kind == "not-exists"
    (eq,) = child.predicates
    assert (eq.left.varId, eq.left.attr) == (0, "b")
    assert eq.op == "="
    assert (eq.right.varId, eq.right.attr) == (1, "c")


def test_in_eq_precedes_body_predicates(antijoin_schema):
    sql = ("select distinct A from R "
           "where B in (select C from S where C > 1)")
    q = analyze(sql, antijoin_schema)
    (child,) = q.root.children
    assert child.kind == "exists"
    assert child.predicates[0].right.attr == "c"  # the injected join
    assert isinstance(child.predicates[1].right, ConstOperand)
    assert [p.predId for p in child.predicates] == [0, 1]


def test_antijoin_variants_lower_identically(antijoin_in_sql, antijoin_exists_sql, antijoin_schema):
    qa = analyze(antijoin_in_sql, antijoin_schema)
    qb = analyze(antijoin_exists_sql, antijoin_schema)
    assert block_shape(qa.root) == block_shape(qb.root)
    assert [o.name for o in qa.outputs] == [o.name for o in qb.outputs]


# forall rewrite


def test_forall_rewrites_qonly(qonly_sql):
    q = forall_transform(analyze(qonly_sql))
    (serves,) = q.root.children
    assert serves.kind == "forall-implies"
    (likes,) = serves.children
    assert likes.kind == "exists"
    # hypothesis keeps the correlation predicate
    assert serves.predicates[0].left.attr == "bar"


def test_forall_skips_two_child_blocks(unique_taste_sql):
    q = forall_transform(analyze(unique_taste_sql))
    (l2,) = q.root.children
    assert l2.kind == "not-exists"  # two children, no pairing
    assert len(l2.children) == 2
    assert {c.kind for c in l2.children} == {"forall-implies"}
    for c in l2.children:
        assert c.children[0].kind == "exists"


def test_forall_on_depth4_chain(depth4_sql):
    q = forall_transform(analyze(depth4_sql))
    kinds = [b.kind for b in walk_blocks(q.root)]
    assert kinds == ["root", "forall-implies", "exists", "forall-implies", "exists"]


def test_forall_leaves_plain_exists_alone(qsome_sql, antijoin_schema):
    q = analyze(qsome_sql)
    assert forall_transform(q) == q
    q2 = analyze("select distinct A from R where B in (select C from S)",
                 antijoin_schema)
    assert forall_transform(q2) == q2


def test_forall_single_pass_is_fixpoint(depth4_sql, qonly_sql, unique_taste_sql):
    for sql in (depth4_sql, qonly_sql, unique_taste_sql):
        once = forall_transform(analyze(sql))
        assert forall_transform(once) == once


def test_forall_preserves_ids_and_spans(qonly_sql):
    before = analyze(qonly_sql)
    after = forall_transform(before)
    for a, b in zip(walk_blocks(before.root), walk_blocks(after.root)):
        assert a.blockId == b.blockId
        assert a.span == b.span
        assert a.vars == b.vars
        assert a.predicates == b.predicates
    assert before.spanMap == after.spanMap


# nesting depth


@pytest.mark.parametrize("fixture,expected", [
    ("qsome_sql", 0),
    ("qonly_sql", 2),
    ("unique_taste_sql", 3),
    ("depth4_sql", 4),
])
def test_nesting_depth(fixture, expected, request):
    sql = request.getfixturevalue(fixture)
    q = analyze(sql)
    assert nesting_depth(q) == expected
    assert nesting_depth(forall_transform(q)) == expected


# span map


@pytest.mark.parametrize("fixture", [
    "qsome_sql", "qonly_sql", "antijoin_in_sql", "unique_taste_sql", "depth4_sql"])
def test_span_map_is_total(fixture, request):
    sql = request.getfixturevalue(fixture)
    q = analyze(sql)
    keys = {"select"}
    for b in walk_blocks(q.root):
        keys.add(f"block:{b.blockId}")
        keys.update(f"var:{v.varId}" for v in b.vars)
        keys.update(f"pred:{p.predId}" for p in b.predicates)
    keys.update(f"out:{o.index}" for o in q.outputs)
    assert set(q.spanMap) == keys
    for span in q.spanMap.values():
        assert 0 <= span.start < span.end <= len(sql)


def test_var_spans_cover_from_items(qsome_sql):
    q = analyze(qsome_sql)
    texts = [qsome_sql[v.span.start:v.span.end] for v in q.root.vars]
    assert texts == ["Frequents F", "Likes L", "Serves S"]


def test_pred_span_covers_comparison(qsome_sql):
    q = analyze(qsome_sql)
    first = q.root.predicates[0]
    assert qsome_sql[first.span.start:first.span.end] == "F.person = L.person"


def test_generated_queries_lower_cleanly():
    for gq in pattern_corpus(30, seed=4242):
        q = analyze(gq.sql())
        assert isinstance(q, CalculusQuery)
        ids = [b.blockId for b in walk_blocks(q.root)]
        assert ids == sorted(ids)
        once = forall_transform(q)
        assert forall_transform(once) == once
        assert nesting_depth(once) == nesting_depth(q)
