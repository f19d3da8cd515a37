from __future__ import annotations

import random

import pytest

from qviz.calculus import forall_transform, lower
from qviz.errors import InvalidDatabase, SchemaMismatch, TypeMismatch
from qviz.evaluate import Database, evaluate
from qviz.parser import parse
from qviz.resolver import resolve

from corpus import RELATIONS, pattern_corpus, random_database, random_query


def analyze(sql, schema=None):
    return lower(resolve(parse(sql), schema, source=sql))


BEER_DB = Database.from_dict({
    "frequents": [
        {"person": "alice", "bar": "tavern"},
        {"person": "bob", "bar": "pub"},
    ],
    "likes": [
        {"person": "alice", "drink": "beer"},
        {"person": "bob", "drink": "mead"},
    ],
    "serves": [
        {"bar": "tavern", "drink": "beer"},
        {"bar": "pub", "drink": "cider"},
    ],
})


# hand-checked goldens


def test_qsome_golden(qsome_sql):
    # alice's tavern serves beer which she likes; bob's pub serves only
    # cider which he does not
    assert evaluate(analyze(qsome_sql), BEER_DB) == {("alice",)}


def test_qsome_against_nested_loop_reference(qsome_sql):
    q = analyze(qsome_sql)
    rels = BEER_DB.relations
    expected = {
        (f["person"],)
        for f in rels["frequents"]
        for l in rels["likes"]
        for s in rels["serves"]
        if f["person"] == l["person"] and f["bar"] == s["bar"]
        and l["drink"] == s["drink"]
    }
    assert evaluate(q, BEER_DB) == expected


def test_qonly_golden(qonly_sql):
    assert evaluate(analyze(qonly_sql), BEER_DB) == {("alice",)}


def test_qonly_vacuous_truth(qonly_sql):
    # nobody serves anything, so every frequented bar trivially serves
    # nothing unliked
    db = Database.from_dict({
        "frequents": [{"person": "carol", "bar": "void"}],
        "likes": [],
        "serves": [],
    })
    assert evaluate(analyze(qonly_sql), db) == {("carol",)}


def test_qonly_forall_same_result(qonly_sql):
    q = analyze(qonly_sql)
    assert evaluate(forall_transform(q), BEER_DB) == evaluate(q, BEER_DB)


def test_constant_and_inequality():
    q = analyze("select distinct r.a from R r where r.a > 1 and r.b <> 2",
                None)
    db = Database.from_dict({
        "r": [{"a": 0, "b": 1}, {"a": 2, "b": 2}, {"a": 3, "b": 0}],
    })
    assert evaluate(q, db) == {(3,)}


def test_duplicate_rows_are_one_tuple():
    db = Database.from_dict({"r": [{"a": 1}, {"a": 1}, {"a": 2}]})
    assert db.relations["r"] == [{"a": 1}, {"a": 2}]


def test_string_comparison_is_lexicographic():
    q = analyze("select distinct r.a from R r where r.a < 'm'")
    db = Database.from_dict({"r": [{"a": "ale"}, {"a": "stout"}]})
    assert evaluate(q, db) == {("ale",)}


# rejected databases


@pytest.mark.parametrize("data,needle", [
    ([], "object"),
    ({"r": {"a": 1}}, "array"),
    ({"r": [[1, 2]]}, "not an object"),
    ({"r": [{"a": None}]}, "NULL"),
    ({"r": [{"a": True}]}, "integer or a string"),
    ({"r": [{"a": 1.5}]}, "integer or a string"),
    ({"r": [{"a": 1}, {"b": 2}]}, "different attribute set"),
])
def test_invalid_database(data, needle):
    with pytest.raises(InvalidDatabase) as exc:
        Database.from_dict(data)
    assert needle in str(exc.value)


def test_missing_relation(qsome_sql):
    db = Database.from_dict({"frequents": [], "likes": []})
    with pytest.raises(SchemaMismatch):
        evaluate(analyze(qsome_sql), db)


def test_missing_attribute(qsome_sql):
    db = Database.from_dict({
        "frequents": [{"person": "a", "bar": "b"}],
        "likes": [{"person": "a", "drink": "x"}],
        "serves": [{"bar": "b"}],  # no drink column
    })
    with pytest.raises(SchemaMismatch) as exc:
        evaluate(analyze(qsome_sql), db)
    assert "drink" in str(exc.value)


def test_empty_relation_skips_attribute_check(qsome_sql):
    db = Database.from_dict({"frequents": [], "likes": [], "serves": []})
    assert evaluate(analyze(qsome_sql), db) == set()


def test_type_mismatch(qsome_sql):
    db = Database.from_dict({
        "frequents": [{"person": "a", "bar": "b"}],
        "likes": [{"person": "a", "drink": 1}],
        "serves": [{"bar": "b", "drink": "beer"}],
    })
    with pytest.raises(TypeMismatch):
        evaluate(analyze(qsome_sql), db)


# rewrite equivalence over random instances


def test_forall_transform_preserves_semantics():
    rng = random.Random(60601)
    for gq in pattern_corpus(20, seed=31007):
        q = analyze(gq.sql())
        qf = forall_transform(q)
        for _ in range(5):
            db = Database.from_dict(random_database(rng, RELATIONS))
            assert evaluate(qf, db) == evaluate(q, db)


def test_in_and_exists_phrasings_agree():
    rng = random.Random(60602)
    checked = 0
    for _ in range(80):
        gq = random_query(rng, max_depth=2)
        if gq.sql(in_style=True) == gq.sql():
            continue  # no IN-able child in this query
        q_in = analyze(gq.sql(in_style=True))
        q_ex = analyze(gq.sql())
        for _ in range(3):
            db = Database.from_dict(random_database(rng, RELATIONS))
            assert evaluate(q_in, db) == evaluate(q_ex, db)
        checked += 1
    assert checked >= 10
