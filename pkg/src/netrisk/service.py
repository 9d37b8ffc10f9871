"""HTTP service exposing model upload, reports, scenarios and curve data.

Models are uploaded once and kept as immutable in-memory snapshots keyed
by a content hash, so repeated uploads of the same document land on the
same id and every response is a deterministic function of the stored
model and the request body. Scenario evaluation builds a fresh model
per request and never touches the stored one. With a model directory
configured, uploads are written through to disk and existing files are
loaded back on startup.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, Response
from pydantic import BaseModel, ConfigDict, Field

from . import curves, engine, model_io
from .errors import ValidationError
from .model import ModelDocument

logger = logging.getLogger(__name__)

DEFAULT_MAX_BODY_BYTES = 8 * 1024 * 1024


class DiagnosticPayload(BaseModel):
    severity: str
    code: str
    path: str
    message: str


class DiagnosticsResponse(BaseModel):
    diagnostics: list[DiagnosticPayload]


class TotalsPayload(BaseModel):
    direct: float
    indirect: float
    total: float


class CellPayload(BaseModel):
    component_id: str
    event_type_id: str
    pf: float
    pcf_direct: float
    pcf_indirect: float
    pcf_total: float
    importance: float | None


class ConnectionPayload(BaseModel):
    from_node: str
    to_node: str
    value: float


class ReportPayload(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_id: str = Field(alias="schema")
    total: TotalsPayload
    importance_defined: bool
    cells: list[CellPayload]
    component_totals: dict[str, TotalsPayload]
    event_totals: dict[str, TotalsPayload]
    line_totals: dict[str, TotalsPayload]
    component_importance: dict[str, float] | None
    event_importance: dict[str, float] | None
    line_importance: dict[str, float] | None
    connection_failure_probability: list[ConnectionPayload]
    warnings: list[str]


class ModelCreatedResponse(BaseModel):
    model_config = ConfigDict(protected_namespaces=())

    model_id: str
    report: ReportPayload


class DeltaEntryPayload(BaseModel):
    absolute: float
    relative: float | None


class DeltaPayload(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_id: str = Field(alias="schema")
    total: DeltaEntryPayload
    per_component: dict[str, DeltaEntryPayload]
    per_event: dict[str, DeltaEntryPayload]
    per_line: dict[str, DeltaEntryPayload]


class ScenarioOutcomeResponse(BaseModel):
    report: ReportPayload
    delta: DeltaPayload


class CurvePointPayload(BaseModel):
    x: float
    y: float


class CurveResponse(BaseModel):
    kind: str
    target: str
    unit: str
    points: list[CurvePointPayload]


@dataclass(frozen=True)
class SessionModel:
    model_id: str
    document: ModelDocument
    base_report: engine.RiskReport
    report_bytes: bytes
    created_at: datetime


class ModelStore:
    """Concurrent-read store; insertion is serialized, entries immutable."""

    def __init__(self):
        self._lock = threading.Lock()
        self._sessions: dict[str, SessionModel] = {}

    def get(self, model_id: str) -> SessionModel | None:
        return self._sessions.get(model_id)

    def put(self, session: SessionModel) -> SessionModel:
        with self._lock:
            return self._sessions.setdefault(session.model_id, session)


def _diagnostics_json(diagnostics, status: int) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={
            "diagnostics": [
                {
                    "severity": d.severity,
                    "code": d.code,
                    "path": d.path,
                    "message": d.message,
                }
                for d in diagnostics
            ]
        },
    )


def _error_json(status: int, code: str, message: str) -> JSONResponse:
    return _diagnostics_json(
        [model_io.Diagnostic(model_io.ERROR, code, "$", message)], status
    )


def _session_from_document(data: bytes):
    """Validate, evaluate and freeze one uploaded document.

    Returns (session, diagnostics); session is None when anything failed.
    """
    result = model_io.load_model(data)
    if not result.ok:
        return None, result.diagnostics
    try:
        report = engine.evaluate(result.model)
    except ValidationError as err:
        return None, result.diagnostics + (
            model_io.Diagnostic(model_io.ERROR, err.code, "$", err.message),
        )
    canonical = model_io.serialize_model(result.model)
    model_id = hashlib.sha256(canonical).hexdigest()[:16]
    session = SessionModel(
        model_id=model_id,
        document=result.model,
        base_report=report,
        report_bytes=model_io.emit_report(report, "structured"),
        created_at=datetime.now(timezone.utc),
    )
    return session, result.diagnostics


def create_app(
    model_dir: Path | None = None,
    ui_dir: Path | None = None,
    max_body_bytes: int = DEFAULT_MAX_BODY_BYTES,
) -> FastAPI:
    app = FastAPI(title="netrisk", version="0.1.0")
    store = ModelStore()

    if model_dir is not None:
        model_dir.mkdir(parents=True, exist_ok=True)
        for path in sorted(model_dir.glob("*.json")):
            session, diagnostics = _session_from_document(path.read_bytes())
            if session is None:
                logger.warning(
                    "skipping %s: %s",
                    path,
                    "; ".join(d.render() for d in diagnostics),
                )
            else:
                store.put(session)

    @app.post(
        "/models",
        status_code=201,
        response_model=ModelCreatedResponse,
        responses={400: {"model": DiagnosticsResponse}, 413: {}, 422: {"model": DiagnosticsResponse}},
    )
    async def upload_model(request: Request):
        declared = request.headers.get("content-length")
        if declared is not None and declared.isdigit() and int(declared) > max_body_bytes:
            return _error_json(413, "body_too_large", "model document too large")
        body = await request.body()
        if len(body) > max_body_bytes:
            return _error_json(413, "body_too_large", "model document too large")
        if not body:
            return _error_json(400, "empty_body", "request body is empty")
        session, diagnostics = _session_from_document(body)
        if session is None:
            malformed = any(
                d.code in ("parse_error", "document_not_object")
                for d in diagnostics
            )
            return _diagnostics_json(diagnostics, 400 if malformed else 422)
        session = store.put(session)
        if model_dir is not None:
            target = model_dir / f"{session.model_id}.json"
            if not target.exists():
                target.write_bytes(model_io.serialize_model(session.document))
        return ModelCreatedResponse(
            model_id=session.model_id,
            report=ReportPayload.model_validate(
                model_io.report_to_dict(session.base_report)
            ),
        )

    @app.get("/models/{model_id}/report")
    def get_report(model_id: str):
        session = store.get(model_id)
        if session is None:
            return _error_json(404, "unknown_model", f"no model {model_id!r}")
        return Response(content=session.report_bytes, media_type="application/json")

    @app.post(
        "/models/{model_id}/scenarios",
        response_model=ScenarioOutcomeResponse,
        responses={404: {}, 422: {"model": DiagnosticsResponse}},
    )
    async def evaluate_scenario(model_id: str, request: Request):
        session = store.get(model_id)
        if session is None:
            return _error_json(404, "unknown_model", f"no model {model_id!r}")
        body = await request.body()
        try:
            raw = json.loads(body.decode("utf-8")) if body else {}
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            return _error_json(400, "parse_error", f"scenario body is not JSON: {exc}")
        result = model_io.scenario_from_dict(raw)
        if not result.ok:
            return _diagnostics_json(result.diagnostics, 422)
        try:
            variant = engine.apply_scenario(session.document, result.scenario)
            variant_report = engine.evaluate(variant)
            delta = engine.what_if_delta(session.base_report, variant_report)
        except ValidationError as err:
            return _error_json(422, err.code, err.message)
        return ScenarioOutcomeResponse(
            report=ReportPayload.model_validate(
                model_io.report_to_dict(variant_report)
            ),
            delta=DeltaPayload.model_validate(model_io.delta_to_dict(delta)),
        )

    @app.get(
        "/models/{model_id}/curves",
        response_model=CurveResponse,
        responses={404: {}},
    )
    def get_curve(model_id: str, kind: str, target: str):
        session = store.get(model_id)
        if session is None:
            return _error_json(404, "unknown_model", f"no model {model_id!r}")
        first, _, second = target.partition("/")
        if not second:
            return _error_json(
                404,
                "unknown_curve_target",
                "target must be component/event (fragility, failure) or "
                "event/area (hazard)",
            )
        try:
            if kind == "fragility":
                unit, points = curves.fragility_curve_points(
                    session.document, first, second
                )
            elif kind == "hazard":
                unit, points = curves.hazard_curve_points(
                    session.document, first, second
                )
            elif kind == "failure":
                unit, points = curves.failure_curve_points(
                    session.document, first, second
                )
            else:
                return _error_json(
                    422,
                    "curve_kind_invalid",
                    f"kind must be fragility, hazard or failure, got {kind!r}",
                )
        except ValidationError as err:
            return _error_json(404, err.code, err.message)
        return CurveResponse(
            kind=kind,
            target=target,
            unit=unit,
            points=[CurvePointPayload(x=x, y=y) for x, y in points],
        )

    if ui_dir is not None and ui_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
