from __future__ import annotations

import json
import random

import pytest
from fastapi.testclient import TestClient

from qviz import __version__
from qviz.render.interchange import from_interchange
from qviz.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def post(client, **body):
    return client.post("/api/visualize", json=body)


def test_health(client):
    r = client.get("/api/health")
    assert r.status_code == 200
    assert r.json() == {"version": __version__}


def test_visualize_success(client, qsome_sql):
    r = post(client, sql=qsome_sql)
    assert r.status_code == 200
    body = r.json()
    assert body["diagnostics"] == []
    assert body["svg"].startswith("<svg")
    assert body["interchange"]["dialect"] == "queryvis"
    assert body["interchange"]["stats"]["nodes"] == 4
    # the interchange payload loads back into a diagram
    d, lay = from_interchange(body["interchange"])
    assert len(d.nodes) == 4


def test_dialect_spellings(client, qonly_sql):
    short = post(client, sql=qonly_sql, dialect="rd").json()
    full = post(client, sql=qonly_sql, dialect="relational-diagrams").json()
    assert short == full
    assert short["interchange"]["dialect"] == "relational-diagrams"


def test_forall_flag(client, qonly_sql):
    on = post(client, sql=qonly_sql, dialect="queryvis", forall=True).json()
    off = post(client, sql=qonly_sql, dialect="queryvis", forall=False).json()
    styles_on = [g["style"] for g in on["interchange"]["groups"]]
    styles_off = [g["style"] for g in off["interchange"]["groups"]]
    assert styles_on == ["forall-double"]
    assert styles_off == ["not-exists-dashed", "not-exists-dashed"]


def test_sql_error_is_diagnostic_not_http_error(client):
    r = post(client, sql="selec distinct f.person from Frequents f")
    assert r.status_code == 200
    body = r.json()
    assert body["svg"] is None and body["interchange"] is None
    (diag,) = body["diagnostics"]
    assert diag["severity"] == "error"
    assert diag["start"] == 0 and diag["end"] == 5


def test_unsupported_feature_diagnostic(client):
    r = post(client, sql="select distinct r.a from R r group by r.a")
    body = r.json()
    (diag,) = body["diagnostics"]
    assert diag["code"] == "unsupported-feature"
    assert "group by" in body["diagnostics"][0]["message"].lower()


def test_depth_limit_diagnostic_and_rd_escape(client, depth4_sql):
    r = post(client, sql=depth4_sql, dialect="queryvis")
    (diag,) = r.json()["diagnostics"]
    assert diag["code"] == "depth-exceeded"
    ok = post(client, sql=depth4_sql, dialect="rd")
    assert ok.json()["svg"] is not None


def test_schema_field(client):
    schema = {"R": ["A", "B"], "S": ["C"]}
    good = post(client, sql="select distinct A from R where B not in (select C from S)",
                schema=schema)
    assert good.json()["diagnostics"] == []
    bad = post(client, sql="select distinct A from R where Z = 1", schema=schema)
    (diag,) = bad.json()["diagnostics"]
    assert diag["code"] == "unknown-attribute"


def test_missing_distinct_warning(client):
    r = post(client, sql="select r.a from R r")
    body = r.json()
    assert body["svg"] is not None
    (diag,) = body["diagnostics"]
    assert diag["severity"] == "warning"


@pytest.mark.parametrize("body", [
    {},
    {"dialect": "queryvis"},
    {"sql": 12},
    {"sql": "select distinct r.a from R r", "dialect": "viz"},
    {"sql": "select distinct r.a from R r", "forall": "yes"},
    {"sql": "select distinct r.a from R r", "schema": {"R": "a"}},
])
def test_malformed_request_is_400(client, body):
    r = client.post("/api/visualize", json=body)
    assert r.status_code == 400


def test_statelessness_under_interleaving(client, qsome_sql, qonly_sql, depth4_sql):
    requests = [
        {"sql": qsome_sql},
        {"sql": qonly_sql, "dialect": "rd"},
        {"sql": "selec x", "dialect": "queryvis"},
        {"sql": depth4_sql, "dialect": "relational-diagrams", "forall": False},
    ]
    baseline = [post(client, **b).json() for b in requests]
    rng = random.Random(7)
    for _ in range(3):
        order = list(range(len(requests)))
        rng.shuffle(order)
        for i in order:
            assert post(client, **requests[i]).json() == baseline[i]


def test_responses_are_deterministic(client, unique_taste_sql):
    a = post(client, sql=unique_taste_sql, dialect="rd").json()
    b = post(client, sql=unique_taste_sql, dialect="rd").json()
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_frontend_mount(tmp_path):
    (tmp_path / "index.html").write_text("<!doctype html><title>studio</title>")
    app = TestClient(create_app(frontend_dir=tmp_path))
    r = app.get("/")
    assert r.status_code == 200
    assert "studio" in r.text
    # api still reachable when the mount exists
    assert app.get("/api/health").status_code == 200


def test_no_mount_without_frontend():
    app = TestClient(create_app())
    assert app.get("/").status_code == 404
