"""Brute-force evaluation of calculus queries over tiny databases.

This is the semantic oracle for the rest of the toolkit: every structural
rewrite (IN collapse, the forall transform) must preserve the result of
`evaluate` on every database.  Evaluation enumerates all assignments, so it
is only meant for databases with a handful of tuples per relation.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .calculus import (
    AttrOperand,
    CalculusQuery,
    ConstOperand,
    QuantifierBlock,
    walk_blocks,
)
from .errors import InvalidDatabase, SchemaMismatch, TypeMismatch

Row = dict[str, int | str]


@dataclass(frozen=True)
class Database:
    """Relation name (lowercase) to a list of rows (attr -> value)."""
    relations: dict[str, list[Row]]

    @staticmethod
    def from_dict(data: dict) -> "Database":
        if not isinstance(data, dict):
            raise InvalidDatabase("database must be a JSON object of relations")
        relations: dict[str, list[Row]] = {}
        for rel, rows in data.items():
            if not isinstance(rows, list):
                raise InvalidDatabase(f"relation {rel!r} must be an array of rows")
            norm_rows: list[Row] = []
            attr_set: frozenset[str] | None = None
            for i, row in enumerate(rows):
                if not isinstance(row, dict):
                    raise InvalidDatabase(f"relation {rel!r} row {i} is not an object")
                norm: Row = {}
                for attr, value in row.items():
                    if value is None:
                        raise InvalidDatabase(
                            f"relation {rel!r} row {i}: NULL values are not supported")
                    if isinstance(value, bool) or not isinstance(value, (int, str)):
                        raise InvalidDatabase(
                            f"relation {rel!r} row {i}: attribute {attr!r} must be an "
                            f"integer or a string, got {type(value).__name__}")
                    norm[attr.lower()] = value
                if attr_set is None:
                    attr_set = frozenset(norm)
                elif frozenset(norm) != attr_set:
                    raise InvalidDatabase(
                        f"relation {rel!r} row {i} has a different attribute set "
                        f"than earlier rows")
                # set semantics: a repeated row is the same tuple
                if norm not in norm_rows:
                    norm_rows.append(norm)
            relations[rel.lower()] = norm_rows
        return Database(relations)

    def attrs(self, rel: str) -> frozenset[str] | None:
        """Attribute set of a relation, or None if it has no rows."""
        rows = self.relations[rel]
        return frozenset(rows[0]) if rows else None


def load_database(path: str | Path) -> Database:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise InvalidDatabase(f"database file is not valid JSON: {e}") from None
    return Database.from_dict(data)


def _check_compatible(q: CalculusQuery, db: Database) -> None:
    attrs_used: dict[int, set[str]] = {}
    var_rel: dict[int, str] = {}
    for b in walk_blocks(q.root):
        for v in b.vars:
            var_rel[v.varId] = v.relation.lower()
            attrs_used.setdefault(v.varId, set())
        for p in b.predicates:
            attrs_used[p.left.varId].add(p.left.attr)
            if isinstance(p.right, AttrOperand):
                attrs_used[p.right.varId].add(p.right.attr)
    for o in q.outputs:
        attrs_used[o.attr.varId].add(o.attr.attr)

    for var_id, rel in var_rel.items():
        if rel not in db.relations:
            raise SchemaMismatch(f"database has no relation {rel!r}")
        rel_attrs = db.attrs(rel)
        if rel_attrs is None:
            continue  # empty relation: no row will ever be inspected
        missing = attrs_used[var_id] - rel_attrs
        if missing:
            raise SchemaMismatch(
                f"relation {rel!r} in the database lacks attribute(s) "
                f"{', '.join(sorted(missing))}")


def _value(operand: AttrOperand | ConstOperand, env: dict[int, Row]) -> int | str:
    if isinstance(operand, ConstOperand):
        return operand.value
    return env[operand.varId][operand.attr]


def _compare(left: int | str, op: str, right: int | str) -> bool:
    if isinstance(left, str) != isinstance(right, str):
        raise TypeMismatch(
            f"cannot compare {type(left).__name__} with {type(right).__name__}")
    if op == "=":
        return left == right
    if op == "<>":
        return left != right
    if op == "<":
        return left < right
    if op == "<=":
        return left <= right
    if op == ">":
        return left > right
    return left >= right


def _preds_hold(block: QuantifierBlock, env: dict[int, Row]) -> bool:
    return all(_compare(_value(p.left, env), p.op, _value(p.right, env))
               for p in block.predicates)


def _assignments(vars_, db: Database, env: dict[int, Row]):
    """Yield env extended with every assignment of rows to `vars_`."""
    if not vars_:
        yield env
        return
    head, rest = vars_[0], vars_[1:]
    rows = db.relations[head.relation.lower()]
    for row in rows:
        env[head.varId] = row
        yield from _assignments(rest, db, env)
    env.pop(head.varId, None)


def _block_holds(block: QuantifierBlock, db: Database, env: dict[int, Row]) -> bool:
    if block.kind == "exists":
        return any(_preds_hold(block, e) and _children_hold(block, db, e)
                   for e in _assignments(block.vars, db, env))
    if block.kind == "not-exists":
        return not any(_preds_hold(block, e) and _children_hold(block, db, e)
                       for e in _assignments(block.vars, db, env))
    if block.kind == "forall-implies":
        return all(not _preds_hold(block, e) or _children_hold(block, db, e)
                   for e in _assignments(block.vars, db, env))
    raise ValueError(f"cannot evaluate block kind {block.kind!r}")


def _children_hold(block: QuantifierBlock, db: Database, env: dict[int, Row]) -> bool:
    return all(_block_holds(c, db, env) for c in block.children)


def evaluate(q: CalculusQuery, db: Database) -> set[tuple]:
    """Evaluate `q` over `db` under set semantics.

    Returns the set of output tuples.  Raises SchemaMismatch when the query
    references relations or attributes the database lacks, and TypeMismatch
    when a comparison mixes integers and strings.
    """
    _check_compatible(q, db)
    results: set[tuple] = set()
    for env in _assignments(q.root.vars, db, {}):
        if _preds_hold(q.root, env) and _children_hold(q.root, db, env):
            results.add(tuple(env[o.attr.varId][o.attr.attr] for o in q.outputs))
    return results
