"""HTTP session service exposing the assistant to remote clients.

Endpoints (JSON bodies, one full report back on every mutation):

* ``POST /sessions``                       body ``{"kb": "<kb text>"}`` -> ``{"id", "report"}``
* ``POST /sessions/{id}/facts``            body ``{"symbol", "value", "role"}`` -> ``{"report"}``
* ``DELETE /sessions/{id}/facts/{symbol}`` -> ``{"report"}``
* ``GET /sessions/{id}/report?mode=exact|approx`` -> ``{"report"}``
* ``GET /sessions/{id}/solutions?limit=N`` -> ``{"models": [...]}``

Errors carry ``{"error": {"code", "message", ...}}`` with codes from a closed
set: ``kb_parse_error``, ``unknown_session``, ``wrong_role``, ``blocked``,
``already_interpreted``, ``not_interpreted``, ``size_guard``.  A blocked
observation additionally carries ``hints``: the minimal sets of decisions
whose retraction would let it in.

Sessions live in memory; mutations on one session are serialized by a lock.
"""

from __future__ import annotations

import threading
import uuid
from typing import Any, Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .assistant import (
    AlreadyInterpretedError,
    NotInterpretedError,
    Role,
    Session,
    SizeGuardError,
    StateReport,
    WrongRoleError,
)
from .engine import BOTH, StateInconsistentError, enumerate_models
from .logic import BoolDomain, Domain, EnumDomain, IntRange, Value
from .parsing import ParseError, parse_kb

SCHEMA_VERSION = "mxassist-report/1"


class _ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, **extra: Any):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.extra = extra


def _error_response(exc: _ApiError) -> JSONResponse:
    body = {"error": {"code": exc.code, "message": exc.message, **exc.extra}}
    return JSONResponse(status_code=exc.status, content=body)


def _domain_to_json(domain: Domain) -> dict:
    if isinstance(domain, BoolDomain):
        return {"type": "bool"}
    if isinstance(domain, EnumDomain):
        return {"type": "enum", "values": list(domain.names)}
    if isinstance(domain, IntRange):
        return {"type": "int", "lo": domain.lo, "hi": domain.hi}
    raise TypeError(domain)


def report_to_json(report: StateReport) -> dict:
    symbols = []
    for entry in report.symbols:
        item: dict[str, Any] = {
            "name": entry.name,
            "kind": entry.kind.value,
            "domain": _domain_to_json(entry.domain),
            "status": entry.status.value,
        }
        if entry.value is not None:
            item["value"] = entry.value
        symbols.append(item)
    return {
        "schema": SCHEMA_VERSION,
        "satisfiable": report.satisfiable,
        "mode": report.mode,
        "symbols": symbols,
        "banners": {"definite": report.definite, "contingent": report.contingent},
        "history_length": report.history_length,
    }


def coerce_value(domain: Domain, raw: Any) -> Value:
    """Accept native JSON values and their string forms from UI inputs."""
    if isinstance(domain, BoolDomain):
        if isinstance(raw, bool):
            return raw
        if isinstance(raw, str) and raw.lower() in ("true", "false"):
            return raw.lower() == "true"
    elif isinstance(domain, IntRange):
        if isinstance(raw, bool):
            pass
        elif isinstance(raw, int):
            return raw
        elif isinstance(raw, str):
            try:
                return int(raw.strip())
            except ValueError:
                pass
    elif isinstance(domain, EnumDomain):
        if isinstance(raw, str):
            return raw
    raise _ApiError(
        400, "kb_parse_error", "value %r does not fit the domain %s" % (raw, domain.describe())
    )


class _Entry:
    def __init__(self, session: Session):
        self.session = session
        self.lock = threading.Lock()


class FactBody(BaseModel):
    symbol: str
    value: Any
    role: str


class CreateBody(BaseModel):
    kb: str


def create_app(static_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="mxassist session service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    sessions: dict[str, _Entry] = {}

    @app.exception_handler(_ApiError)
    async def handle_api_error(_request: Request, exc: _ApiError):
        return _error_response(exc)

    def entry_of(session_id: str) -> _Entry:
        entry = sessions.get(session_id)
        if entry is None:
            raise _ApiError(404, "unknown_session", "no session %s" % session_id)
        return entry

    def report_of(session: Session, mode: str) -> dict:
        if mode not in ("exact", "approx"):
            raise _ApiError(400, "kb_parse_error", "mode must be 'exact' or 'approx'")
        try:
            report = session.report(mode)  # type: ignore[arg-type]
        except SizeGuardError as exc:
            raise _ApiError(400, "size_guard", str(exc))
        payload = report_to_json(report)
        if not report.satisfiable:
            payload["message"] = "there is no solution to this problem"
        return payload

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateBody):
        try:
            kb = parse_kb(body.kb)
        except ParseError as exc:
            raise _ApiError(
                400, "kb_parse_error", exc.message,
                line=exc.span.line, column=exc.span.column,
            )
        except ValueError as exc:
            raise _ApiError(400, "kb_parse_error", str(exc))
        session = Session(kb)
        session_id = uuid.uuid4().hex
        sessions[session_id] = _Entry(session)
        return {"id": session_id, "report": report_of(session, "approx")}

    @app.post("/sessions/{session_id}/facts")
    def post_fact(session_id: str, body: FactBody):
        entry = entry_of(session_id)
        with entry.lock:
            session = entry.session
            try:
                role = Role(body.role)
            except ValueError:
                raise _ApiError(
                    400, "wrong_role", "role must be 'observation' or 'decision'"
                )
            try:
                symbol = session.kb.vocabulary[body.symbol]
            except KeyError:
                raise _ApiError(400, "kb_parse_error", "undeclared symbol %r" % body.symbol)
            value = coerce_value(symbol.domain, body.value)
            try:
                outcome = session.assert_fact(body.symbol, value, role)
            except WrongRoleError as exc:
                raise _ApiError(409, "wrong_role", str(exc))
            except AlreadyInterpretedError as exc:
                raise _ApiError(409, "already_interpreted", str(exc))
            except StateInconsistentError as exc:
                raise _ApiError(409, "blocked", str(exc), hints=[])
            except ValueError as exc:
                raise _ApiError(400, "kb_parse_error", str(exc))
            if not outcome.accepted:
                hints = [
                    [{"symbol": fact.name, "value": fact.value} for fact in hint]
                    for hint in outcome.hints
                ]
                raise _ApiError(
                    409, "blocked",
                    "the fact contradicts the current decisions", hints=hints,
                )
            return {"report": report_of(session, "approx")}

    @app.delete("/sessions/{session_id}/facts/{symbol}")
    def delete_fact(session_id: str, symbol: str):
        entry = entry_of(session_id)
        with entry.lock:
            try:
                entry.session.retract(symbol)
            except NotInterpretedError as exc:
                raise _ApiError(409, "not_interpreted", str(exc))
            return {"report": report_of(entry.session, "approx")}

    @app.get("/sessions/{session_id}/report")
    def get_report(session_id: str, mode: str = "approx"):
        entry = entry_of(session_id)
        with entry.lock:
            return {"report": report_of(entry.session, mode)}

    @app.get("/sessions/{session_id}/solutions")
    def get_solutions(session_id: str, limit: int = 10):
        if limit < 1:
            raise _ApiError(400, "kb_parse_error", "limit must be at least 1")
        entry = entry_of(session_id)
        with entry.lock:
            session = entry.session
            models = enumerate_models(session.kb, session.state, BOTH, limit=limit)
            return {
                "models": [
                    {name: value for name, value in model.items()} for model in models
                ]
            }

    if static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    return app


app = create_app()
