"""HTTP service and the shared compile pipeline.

The pipeline functions here are the single implementation behind both the
HTTP API and the command line.  The service itself is stateless: every
request carries the full query text plus options and gets a complete answer.

Endpoints:
  POST /api/visualize  {sql, dialect, forall, schema?} -> {svg, interchange, diagnostics}
  GET  /api/health     -> {version}

SQL problems (bad syntax, unknown names, unsupported features, dialect
limits) come back as HTTP 200 with diagnostics and no svg; only a malformed
request body is a 400.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from . import __version__
from .calculus import CalculusQuery, lower
from .diagram import Diagram, build_diagram
from .errors import QvizError
from .layout import Layout
from .layout import layout as compute_layout
from .parser import parse
from .render import StyleConfig, render_svg, to_interchange
from .resolver import resolve
from .sqlast import Schema


def load_schema(data: dict) -> Schema:
    """Build a Schema from {"Relation": ["attr", ...], ...}."""
    relations: dict[str, tuple[str, ...]] = {}
    for rel, attrs in data.items():
        relations[rel.lower()] = tuple(a.lower() for a in attrs)
    return Schema(relations)


def analyze(sql: str, schema: Schema | None = None) -> CalculusQuery:
    """parse -> resolve -> lower."""
    return lower(resolve(parse(sql), schema, source=sql))


@dataclass(frozen=True)
class VisualizeResult:
    query: CalculusQuery
    diagram: Diagram
    layout: Layout
    svg: str
    interchange: dict
    warnings: tuple[str, ...]


def visualize(sql: str, dialect: str = "queryvis", forall: bool = True,
              schema: Schema | None = None,
              style: StyleConfig | None = None) -> VisualizeResult:
    """Full pipeline from SQL text to rendered artifacts."""
    query = analyze(sql, schema)
    diagram = build_diagram(query, dialect, apply_forall=forall)
    lay = compute_layout(diagram, style)
    svg = render_svg(diagram, lay, style)
    doc = to_interchange(diagram, lay)
    return VisualizeResult(query, diagram, lay, svg, doc, query.warnings)


def _error_code(exc: QvizError) -> str:
    name = type(exc).__name__
    return re.sub(r"(?<!^)(?=[A-Z])", "-", name).lower()


class Diagnostic(BaseModel):
    severity: Literal["error", "warning"]
    code: str
    message: str
    start: int | None = None
    end: int | None = None


class VisualizeRequest(BaseModel):
    sql: str
    dialect: Literal["queryvis", "rd", "relational-diagrams"] = "queryvis"
    forall: bool = True
    schema_: dict[str, list[str]] | None = Field(default=None, alias="schema")

    # strict: a request with the wrong types is malformed, not coercible
    model_config = {"populate_by_name": True, "strict": True}


class VisualizeResponse(BaseModel):
    svg: str | None = None
    interchange: dict | None = None
    diagnostics: list[Diagnostic] = []


def diagnostic_from_error(exc: QvizError) -> Diagnostic:
    start = exc.span.start if exc.span is not None else None
    end = exc.span.end if exc.span is not None else None
    return Diagnostic(severity="error", code=_error_code(exc),
                      message=exc.message, start=start, end=end)


def create_app(frontend_dir: str | Path | None = None,
               style: StyleConfig | None = None) -> FastAPI:
    app = FastAPI(title="qviz", version=__version__)

    @app.exception_handler(RequestValidationError)
    async def malformed_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400,
                            content={"detail": exc.errors()})

    @app.get("/api/health")
    async def health() -> dict:
        return {"version": __version__}

    @app.post("/api/visualize", response_model=VisualizeResponse,
              response_model_exclude_none=False)
    async def visualize_endpoint(req: VisualizeRequest) -> VisualizeResponse:
        schema = load_schema(req.schema_) if req.schema_ is not None else None
        try:
            result = visualize(req.sql, req.dialect, req.forall, schema, style)
        except QvizError as exc:
            return VisualizeResponse(svg=None, interchange=None,
                                     diagnostics=[diagnostic_from_error(exc)])
        diagnostics = [Diagnostic(severity="warning", code="notice", message=w)
                       for w in result.warnings]
        return VisualizeResponse(svg=result.svg, interchange=result.interchange,
                                 diagnostics=diagnostics)

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(frontend_dir), html=True),
                  name="studio")

    return app
