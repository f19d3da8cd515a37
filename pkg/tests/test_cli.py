"""End-to-end tests for the command line, driven through main(argv).

The installed qviz script calls main(), which owns the exit-code
contract (0 ok, 1 usage, 2 query error, 3 unsupported), so every test
goes through it rather than through click's standalone mode.
"""
from __future__ import annotations

import io
import json
import socket
import sys

import pytest

from qviz.cli import main

from conftest import DATA


def run(capsys, argv, stdin: str | None = None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- visualize ---------------------------------------------------------------

def test_visualize_svg_stdout(capsys):
    code, out, err = run(capsys, ["visualize", str(DATA / "qsome.sql")])
    assert code == 0
    assert out.startswith("<svg")
    assert out.rstrip().endswith("</svg>")
    assert err == ""


def test_visualize_dot_format(capsys):
    code, out, err = run(
        capsys, ["visualize", str(DATA / "qsome.sql"), "--format", "dot"])
    assert code == 0
    assert out.startswith("digraph")
    assert "Frequents" in out


def test_visualize_json_format_is_interchange(capsys):
    code, out, err = run(
        capsys, ["visualize", str(DATA / "qsome.sql"), "--format", "json"])
    assert code == 0
    doc = json.loads(out)
    assert doc["version"] == "1"
    assert doc["dialect"] == "queryvis"
    from qviz.render import from_interchange
    from_interchange(doc)


def test_visualize_out_file(capsys, tmp_path):
    target = tmp_path / "q.svg"
    code, out, err = run(
        capsys, ["visualize", str(DATA / "qsome.sql"), "--out", str(target)])
    assert code == 0
    assert out == ""
    assert target.read_text().startswith("<svg")


def test_visualize_stdin(capsys, monkeypatch, qsome_sql):
    code, out, err = run(capsys, ["visualize", "-"],
                         stdin=qsome_sql, monkeypatch=monkeypatch)
    assert code == 0
    assert out.startswith("<svg")


def test_visualize_missing_file_is_usage_error(capsys):
    code, out, err = run(capsys, ["visualize", "does-not-exist.sql"])
    assert code == 1
    assert "no such file" in err


def test_visualize_bad_sql_exit_2(capsys, tmp_path):
    bad = tmp_path / "bad.sql"
    bad.write_text("selec distinct r.a from R r")
    code, out, err = run(capsys, ["visualize", str(bad)])
    assert code == 2
    assert err.startswith("error:")
    assert "line 1" in err


def test_visualize_group_by_exit_3(capsys, tmp_path):
    q = tmp_path / "agg.sql"
    q.write_text("select distinct r.a from R r group by r.a")
    code, out, err = run(capsys, ["visualize", str(q)])
    assert code == 3
    assert "error:" in err


def test_visualize_rd_alias_matches_full_name(capsys):
    _, rd_out, _ = run(
        capsys, ["visualize", str(DATA / "qonly.sql"), "--dialect", "rd"])
    _, full_out, _ = run(
        capsys, ["visualize", str(DATA / "qonly.sql"),
                 "--dialect", "relational-diagrams"])
    assert rd_out == full_out


def test_visualize_warning_on_missing_distinct(capsys, tmp_path):
    q = tmp_path / "nod.sql"
    q.write_text("select r.a from R r where r.a = 1")
    code, out, err = run(capsys, ["visualize", str(q)])
    assert code == 0
    assert out.startswith("<svg")
    assert err.startswith("warning:")
    assert "set semantics" in err


# -- fallback ----------------------------------------------------------------

def test_depth4_queryvis_falls_back(capsys):
    code, out, err = run(capsys, ["visualize", str(DATA / "depth4.sql")])
    assert code == 0
    assert out.startswith("<svg")
    assert err.startswith("notice:")
    assert "falling back to the relational-diagrams dialect" in err
    # the rendered artifact really is the rd one
    _, rd_out, _ = run(
        capsys, ["visualize", str(DATA / "depth4.sql"), "--dialect", "rd"])
    assert out == rd_out


def test_depth4_no_fallback_exit_3(capsys):
    code, out, err = run(
        capsys, ["visualize", str(DATA / "depth4.sql"), "--no-fallback"])
    assert code == 3
    assert out == ""
    assert "notice:" not in err
    assert "nesting depth 4 exceeds the queryvis limit of 3" in err


def test_depth4_rd_needs_no_fallback(capsys):
    code, out, err = run(
        capsys, ["visualize", str(DATA / "depth4.sql"), "--dialect", "rd"])
    assert code == 0
    assert err == ""


def test_disconnected_queryvis_falls_back(capsys, tmp_path):
    q = tmp_path / "cross.sql"
    q.write_text("select distinct r.a from R r, S s "
                 "where r.a = 1 and s.b = 2")
    code, out, err = run(capsys, ["visualize", str(q)])
    assert code == 0
    assert out.startswith("<svg")
    assert "falling back" in err
    code, out, err = run(capsys, ["visualize", str(q), "--no-fallback"])
    assert code == 3


# -- cluster -----------------------------------------------------------------

CLUSTER_ARGS = ["cluster", str(DATA / "cluster"),
                "--schema", str(DATA / "cluster_schema.json")]


def test_cluster_text_report(capsys):
    code, out, err = run(capsys, CLUSTER_ARGS)
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("cluster 1: 4 queries  ")
    assert lines[1:5] == [
        "  qsome_from_order.sql",
        "  qsome_plain.sql",
        "  qsome_renamed.sql",
        "  qsome_where_order.sql",
    ]
    assert lines[5].startswith("cluster 2: 2 queries  ")
    assert lines[6:8] == ["  antijoin_not_exists.sql", "  antijoin_not_in.sql"]
    assert len(lines) == 8
    # the short hash is a 12-char prefix of a sha256 hex digest
    short = lines[0].rsplit("  ", 1)[1]
    assert len(short) == 12
    assert all(c in "0123456789abcdef" for c in short)


def test_cluster_json_report(capsys):
    code, out, err = run(capsys, CLUSTER_ARGS + ["--json"])
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"clusters", "skipped"}
    assert doc["skipped"] == []
    assert [c["size"] for c in doc["clusters"]] == [4, 2]
    assert all(len(c["hash"]) == 64 for c in doc["clusters"])


def test_cluster_reports_skipped_files(capsys, tmp_path):
    (tmp_path / "good.sql").write_text(
        "select distinct r.a from R r where r.a = 1")
    (tmp_path / "broken.sql").write_text("select from where")
    code, out, err = run(capsys, ["cluster", str(tmp_path)])
    assert code == 0
    assert "cluster 1: 1 query  " in out
    assert "skipped:" in out
    assert "broken.sql:" in out


def test_cluster_empty_directory(capsys, tmp_path):
    code, out, err = run(capsys, ["cluster", str(tmp_path)])
    assert code == 0
    assert out == ""


def test_cluster_all_skipped_exit_2(capsys, tmp_path):
    (tmp_path / "a.sql").write_text("not sql at all")
    (tmp_path / "b.sql").write_text("select from where")
    code, out, err = run(capsys, ["cluster", str(tmp_path)])
    assert code == 2
    assert out.startswith("skipped:")
    assert "a.sql" in out and "b.sql" in out


def test_cluster_missing_directory(capsys):
    code, out, err = run(capsys, ["cluster", "no/such/dir"])
    assert code == 1
    assert "no such directory" in err


# -- check -------------------------------------------------------------------

def test_check_reports_inferred_schema(capsys):
    code, out, err = run(capsys, ["check", str(DATA / "qsome.sql")])
    assert code == 0
    info = json.loads(out)
    assert set(info) == {"schema", "schemaWasInferred", "tables",
                         "outputs", "nestingDepth", "warnings"}
    assert info["schemaWasInferred"] is True
    assert info["schema"] == {
        "frequents": ["person", "bar"],
        "likes": ["person", "drink"],
        "serves": ["bar", "drink"],
    }
    assert info["tables"] == 3
    assert info["outputs"] == 1
    assert info["nestingDepth"] == 0
    assert info["warnings"] == []


def test_check_with_schema_file(capsys):
    code, out, err = run(
        capsys, ["check", str(DATA / "antijoin_not_in.sql"),
                 "--schema", str(DATA / "antijoin_schema.json")])
    assert code == 0
    info = json.loads(out)
    assert info["schemaWasInferred"] is False
    assert info["nestingDepth"] == 1


def test_check_bad_sql_exit_2(capsys, tmp_path):
    q = tmp_path / "q.sql"
    q.write_text("select distinct r.missing from R r")
    code, out, err = run(
        capsys, ["check", str(q),
                 "--schema", str(DATA / "cluster_schema.json")])
    assert code == 2
    assert "error:" in err


# -- schema file validation ---------------------------------------------------

def test_schema_file_not_json(capsys, tmp_path):
    s = tmp_path / "s.json"
    s.write_text("{nope")
    code, out, err = run(
        capsys, ["visualize", str(DATA / "qsome.sql"), "--schema", str(s)])
    assert code == 1
    assert "not valid JSON" in err


def test_schema_file_wrong_shape(capsys, tmp_path):
    s = tmp_path / "s.json"
    s.write_text('{"R": "a"}')
    code, out, err = run(
        capsys, ["visualize", str(DATA / "qsome.sql"), "--schema", str(s)])
    assert code == 1
    assert "arrays of attribute names" in err


def test_schema_file_missing(capsys):
    code, out, err = run(
        capsys, ["visualize", str(DATA / "qsome.sql"),
                 "--schema", "nope.json"])
    assert code == 1
    assert "no such file" in err


# -- style environment --------------------------------------------------------

def test_style_env_is_honored(capsys, tmp_path, monkeypatch):
    _, base, _ = run(capsys, ["visualize", str(DATA / "qsome.sql")])
    style = tmp_path / "style.json"
    style.write_text('{"fontSize": 30}')
    monkeypatch.setenv("QVIZ_STYLE", str(style))
    code, out, err = run(capsys, ["visualize", str(DATA / "qsome.sql")])
    assert code == 0
    assert out != base
    assert 'font-size="30"' in out


def test_style_env_bad_file_is_usage_error(capsys, tmp_path, monkeypatch):
    style = tmp_path / "style.json"
    style.write_text('{"fontSize": "big"}')
    monkeypatch.setenv("QVIZ_STYLE", str(style))
    code, out, err = run(capsys, ["visualize", str(DATA / "qsome.sql")])
    assert code == 1
    assert "fontSize" in err


# -- misc --------------------------------------------------------------------

def test_version_flag(capsys):
    from qviz import __version__
    code, out, err = run(capsys, ["--version"])
    assert code == 0
    assert __version__ in out


def test_help_exits_zero(capsys):
    code, out, err = run(capsys, ["--help"])
    assert code == 0
    assert "visualize" in out and "cluster" in out


def test_no_arguments_is_usage_error(capsys):
    code, out, err = run(capsys, [])
    assert code == 1


def test_unknown_command_is_usage_error(capsys):
    code, out, err = run(capsys, ["summon"])
    assert code == 1


def test_serve_refuses_taken_port(capsys):
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    probe.bind(("127.0.0.1", 0))
    port = probe.getsockname()[1]
    try:
        code, out, err = run(
            capsys, ["serve", "--port", str(port)])
    finally:
        probe.close()
    assert code == 1
    assert "cannot bind" in err


def test_outputs_are_deterministic(capsys):
    for fmt in ("svg", "dot", "json"):
        args = ["visualize", str(DATA / "unique_taste.sql"),
                "--dialect", "rd", "--format", fmt]
        _, first, _ = run(capsys, args)
        _, second, _ = run(capsys, args)
        assert first == second, fmt
