"""Command-line interface.

Exit codes: 0 success, 1 usage or environment problems, 2 query errors
(syntax, unknown names, bad schema), 3 unsupported SQL features or dialect
limits.  The queryvis dialect falls back to relational-diagrams (with a
notice on stderr) when a query exceeds its depth limit or is disconnected,
unless --no-fallback is given.
"""
from __future__ import annotations

import json
import socket
import sys
from pathlib import Path

import click

from . import __version__
from .errors import DepthExceeded, DisconnectedQuery, QvizError, UnsupportedFeature
from .pattern import cluster_queries
from .render import StyleConfig, render_dot
from .service import analyze, create_app, load_schema, visualize
from .spans import line_col
from .sqlast import Schema

EXIT_USAGE = 1
EXIT_QUERY = 2
EXIT_UNSUPPORTED = 3


def _exit_code(e: QvizError) -> int:
    if isinstance(e, (UnsupportedFeature, DepthExceeded, DisconnectedQuery)):
        return EXIT_UNSUPPORTED
    return EXIT_QUERY


def _report(e: QvizError, source: str | None, prefix: str = "") -> None:
    loc = ""
    if e.span is not None and source:
        line, col = line_col(source, e.span.start)
        loc = f" (line {line}, col {col})"
    click.echo(f"{prefix}error: {e.message}{loc}", err=True)


def _fail(e: QvizError, source: str | None, prefix: str = "") -> None:
    _report(e, source, prefix)
    raise SystemExit(_exit_code(e))


def _read_sql(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    p = Path(path)
    if not p.is_file():
        raise click.UsageError(f"no such file: {path}")
    return p.read_text()


def _load_schema_file(path: str | None) -> Schema | None:
    if path is None:
        return None
    p = Path(path)
    if not p.is_file():
        raise click.UsageError(f"no such file: {path}")
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as e:
        raise click.UsageError(f"schema file is not valid JSON: {e}")
    if not isinstance(data, dict) or not all(
            isinstance(v, list) and all(isinstance(a, str) for a in v)
            for v in data.values()):
        raise click.UsageError(
            "schema file must map relation names to arrays of attribute names")
    return load_schema(data)


def _style() -> StyleConfig:
    try:
        return StyleConfig.from_env()
    except ValueError as e:
        raise click.UsageError(str(e))


@click.group()
@click.version_option(__version__, prog_name="qviz")
def cli() -> None:
    """Turn SQL queries into query-pattern diagrams."""


@cli.command(name="visualize")
@click.argument("file", metavar="FILE")
@click.option("--dialect",
              type=click.Choice(["queryvis", "rd", "relational-diagrams"]),
              default="queryvis", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["svg", "dot", "json"]),
              default="svg", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None,
              help="Write output here instead of stdout.")
@click.option("--schema", "schema_path", type=click.Path(), default=None,
              help="JSON file mapping relations to attribute lists.")
@click.option("--forall/--no-forall", "forall", default=True,
              show_default=True,
              help="Rewrite nested not-exists pairs into forall blocks.")
@click.option("--no-fallback", is_flag=True,
              help="Fail instead of retrying with the relational-diagrams dialect.")
def visualize_cmd(file: str, dialect: str, fmt: str, out: str | None,
                  schema_path: str | None, forall: bool,
                  no_fallback: bool) -> None:
    """Render FILE (or - for stdin) as a diagram."""
    sql = _read_sql(file)
    schema = _load_schema_file(schema_path)
    style = _style()
    try:
        try:
            result = visualize(sql, dialect, forall, schema, style)
        except (DepthExceeded, DisconnectedQuery) as e:
            if dialect != "queryvis" or no_fallback:
                raise
            click.echo(
                f"notice: {e.message}; falling back to the "
                "relational-diagrams dialect", err=True)
            result = visualize(sql, "rd", forall, schema, style)
    except QvizError as e:
        _fail(e, sql)
        return
    for w in result.warnings:
        click.echo(f"warning: {w}", err=True)
    if fmt == "svg":
        payload = result.svg
    elif fmt == "dot":
        payload = render_dot(result.diagram)
    else:
        payload = json.dumps(result.interchange, indent=2) + "\n"
    if out is None:
        click.echo(payload, nl=False)
    else:
        Path(out).write_text(payload)


@cli.command(name="cluster")
@click.argument("directory", metavar="DIR")
@click.option("--schema", "schema_path", type=click.Path(), default=None)
@click.option("--json", "as_json", is_flag=True, help="Emit the report as JSON.")
@click.option("--abstract-constants", is_flag=True,
              help="Ignore constant values when comparing patterns.")
@click.option("--forall/--no-forall", "forall", default=True,
              help="Apply the forall rewrite before comparing patterns.")
def cluster_cmd(directory: str, schema_path: str | None, as_json: bool,
                abstract_constants: bool, forall: bool) -> None:
    """Group the .sql files in DIR by query pattern.

    Files that fail to parse or resolve are listed as skipped and left out
    of the clusters.
    """
    root = Path(directory)
    if not root.is_dir():
        raise click.UsageError(f"no such directory: {directory}")
    schema = _load_schema_file(schema_path)
    items = []
    skipped: list[tuple[str, str]] = []
    for p in sorted(root.glob("*.sql")):
        sql = p.read_text()
        try:
            items.append((p.name, analyze(sql, schema)))
        except QvizError as e:
            loc = ""
            if e.span is not None:
                line, col = line_col(sql, e.span.start)
                loc = f" (line {line}, col {col})"
            skipped.append((p.name, f"{e.message}{loc}"))
    report = cluster_queries(items, forall=forall,
                             abstract_constants=abstract_constants)
    if as_json:
        click.echo(json.dumps({
            "clusters": report,
            "skipped": [{"file": name, "error": why} for name, why in skipped],
        }, indent=2))
    else:
        for i, c in enumerate(report, start=1):
            plural = "query" if c["size"] == 1 else "queries"
            click.echo(f"cluster {i}: {c['size']} {plural}  {c['hash'][:12]}")
            for member in c["members"]:
                click.echo(f"  {member}")
        if skipped:
            click.echo("skipped:")
            for name, why in skipped:
                click.echo(f"  {name}: {why}")
    if skipped and not items:
        # there were queries but none of them clustered
        raise SystemExit(EXIT_QUERY)


@cli.command(name="check")
@click.argument("file", metavar="FILE")
@click.option("--schema", "schema_path", type=click.Path(), default=None)
def check_cmd(file: str, schema_path: str | None) -> None:
    """Parse and resolve FILE; print the schema it uses."""
    sql = _read_sql(file)
    schema = _load_schema_file(schema_path)
    try:
        q = analyze(sql, schema)
    except QvizError as e:
        _fail(e, sql)
        return
    from .calculus import all_vars, nesting_depth
    info = {
        "schema": {rel: list(attrs) for rel, attrs in q.schema.relations.items()},
        "schemaWasInferred": q.schemaWasInferred,
        "tables": len(all_vars(q)),
        "outputs": len(q.outputs),
        "nestingDepth": nesting_depth(q),
        "warnings": list(q.warnings),
    }
    click.echo(json.dumps(info, indent=2))


@cli.command(name="serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--frontend", "frontend_dir", type=click.Path(), default=None,
              help="Directory of static studio files to serve at /.")
def serve_cmd(host: str, port: int, frontend_dir: str | None) -> None:
    """Run the HTTP service."""
    import uvicorn

    style = _style()
    if frontend_dir is None and Path("frontend/dist").is_dir():
        frontend_dir = "frontend/dist"
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.bind((host, port))
    except OSError as e:
        click.echo(f"error: cannot bind {host}:{port} ({e.strerror})", err=True)
        raise SystemExit(EXIT_USAGE)
    finally:
        probe.close()
    app = create_app(frontend_dir, style)
    uvicorn.run(app, host=host, port=port, log_level="warning")


def main(argv: list[str] | None = None) -> int:
    try:
        cli.main(args=argv, prog_name="qviz", standalone_mode=False)
        return 0
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    except click.exceptions.Exit as e:
        return 0 if e.exit_code == 0 else EXIT_USAGE
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except QvizError as e:
        _report(e, None)
        return _exit_code(e)


if __name__ == "__main__":
    sys.exit(main())
