from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).parent / "data"


def read_fixture(name: str) -> str:
    return (DATA / name).read_text()


@pytest.fixture(scope="session")
def qsome_sql() -> str:
    return read_fixture("qsome.sql")


@pytest.fixture(scope="session")
def qonly_sql() -> str:
    return read_fixture("qonly.sql")


@pytest.fixture(scope="session")
def antijoin_in_sql() -> str:
    return read_fixture("antijoin_not_in.sql")


@pytest.fixture(scope="session")
def antijoin_exists_sql() -> str:
    return read_fixture("antijoin_not_exists.sql")


@pytest.fixture(scope="session")
def unique_taste_sql() -> str:
    return read_fixture("unique_taste.sql")


@pytest.fixture(scope="session")
def depth4_sql() -> str:
    return read_fixture("depth4.sql")


@pytest.fixture(scope="session")
def antijoin_schema():
    from qviz.service import load_schema
    import json

    return load_schema(json.loads(read_fixture("antijoin_schema.json")))


@pytest.fixture(scope="session")
def beer_schema():
    from qviz.sqlast import Schema

    return Schema({
        "frequents": ("person", "bar"),
        "likes": ("person", "drink"),
        "serves": ("bar", "drink"),
    })
