"""REST service exposing the pipeline as session-scoped state.

Sessions move strictly forward through created → analyzed → summarized.
Every successful mutation writes an atomic JSON snapshot to
<data_dir>/<session_id>.json; startup reloads whatever snapshots parse,
skipping corrupt ones with a warning. Provider failures surface as 502
and never move a session's phase or touch its data.
"""

from __future__ import annotations

import json
import logging
import os
import threading
import time
import uuid
from dataclasses import dataclass, field as dataclass_field
from enum import Enum
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request, Response
from pydantic import BaseModel, Field

from .core import DocumentSet, Summary, make_document_set
from .errors import (
    ConstraintConflictError,
    EmptySummaryError,
    ExtractionEmptyError,
    InputError,
    ProtocolError,
    ProviderError,
    SummPilotError,
    ValidationError,
)
from .evaluation import evaluate
from .extraction import Triple, cluster_entities, extract_triples
from .gateway import LlmGateway, ProviderConfig
from .graph import build_graph, graph_to_dict
from .serialize import (
    canonical_json,
    cluster_from_dict,
    cluster_to_dict,
    document_to_dict,
    summary_to_dict,
    summary_from_dict,
    triple_from_dict,
    triple_to_dict,
)
from .summarize import DialogueState, RefinementRequest, refine_summary, summarize_auto

logger = logging.getLogger(__name__)

MAX_DOCUMENTS = 16
MAX_DOCUMENT_CHARS = 200_000


class Phase(str, Enum):
    CREATED = "created"
    ANALYZED = "analyzed"
    SUMMARIZED = "summarized"


@dataclass
class ServiceConfig:
    data_dir: Path
    provider: ProviderConfig
    host: str = "127.0.0.1"
    port: int = 8765
    verify_parallelism: int = 4
    ui_dir: Optional[Path] = None  # static frontend served at /, when set


def load_config(path) -> ServiceConfig:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    provider = ProviderConfig(
        kind=data["provider"]["kind"],
        endpoint=data["provider"].get("endpoint"),
        model=data["provider"].get("model", "gpt-4o"),
        playbook_path=data["provider"].get("playbook_path"),
    )
    return ServiceConfig(
        data_dir=Path(data["data_dir"]),
        provider=provider,
        host=data.get("host", "127.0.0.1"),
        port=data.get("port", 8765),
        verify_parallelism=data.get("verify_parallelism", 4),
        ui_dir=Path(data["ui_dir"]) if data.get("ui_dir") else None,
    )


@dataclass
class Session:
    id: str
    docset: DocumentSet
    phase: Phase = Phase.CREATED
    triples: list[Triple] = dataclass_field(default_factory=list)
    clusters: list = dataclass_field(default_factory=list)
    graph: Optional[dict] = None
    summaries: list[Summary] = dataclass_field(default_factory=list)
    reports: dict[int, dict] = dataclass_field(default_factory=dict)
    warnings: list[dict] = dataclass_field(default_factory=list)
    dialogue: Optional[DialogueState] = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "created_at": self.docset.created_at,
            "phase": self.phase.value,
            "documents": [document_to_dict(d) for d in self.docset.documents],
            "triples": [triple_to_dict(t, index=i) for i, t in enumerate(self.triples)],
            "clusters": [cluster_to_dict(c) for c in self.clusters],
            "graph": self.graph,
            "summaries": [summary_to_dict(s) for s in self.summaries],
            "reports": {str(v): r for v, r in sorted(self.reports.items())},
            "warnings": self.warnings,
            "dialogue": self.dialogue.to_dict() if self.dialogue else None,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Session":
        docset = make_document_set(
            bodies=[d["body"] for d in data["documents"]],
            titles=[d.get("title") for d in data["documents"]],
            created_at=data["created_at"],
        )
        return cls(
            id=data["id"],
            docset=docset,
            phase=Phase(data["phase"]),
            triples=[triple_from_dict(t) for t in data["triples"]],
            clusters=[cluster_from_dict(c) for c in data["clusters"]],
            graph=data.get("graph"),
            summaries=[summary_from_dict(s) for s in data["summaries"]],
            reports={int(v): r for v, r in data.get("reports", {}).items()},
            warnings=list(data.get("warnings", [])),
            dialogue=DialogueState.from_dict(data["dialogue"]) if data.get("dialogue") else None,
        )


class SessionStore:
    """In-memory sessions with one JSON snapshot file per session."""

    def __init__(self, data_dir: Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._sessions: dict[str, Session] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._registry_lock = threading.Lock()
        self._load_all()

    def _load_all(self):
        for path in sorted(self.data_dir.glob("*.json")):
            try:
                session = Session.from_dict(json.loads(path.read_text(encoding="utf-8")))
            except (json.JSONDecodeError, KeyError, ValueError, SummPilotError) as exc:
                logger.warning("skipping corrupt session snapshot %s: %s", path.name, exc)
                continue
            self._sessions[session.id] = session
            self._locks[session.id] = threading.Lock()

    def create(self, docset: DocumentSet) -> Session:
        session = Session(id=uuid.uuid4().hex, docset=docset)
        with self._registry_lock:
            self._sessions[session.id] = session
            self._locks[session.id] = threading.Lock()
        self.save(session)
        return session

    def get(self, session_id: str) -> Optional[Session]:
        return self._sessions.get(session_id)

    def lock(self, session_id: str) -> threading.Lock:
        return self._locks[session_id]

    def save(self, session: Session):
        path = self.data_dir / f"{session.id}.json"
        tmp = path.with_suffix(".json.tmp")
        tmp.write_text(canonical_json(session.to_dict(), indent=2), encoding="utf-8")
        os.replace(tmp, path)


class DocumentIn(BaseModel):
    body: str
    title: Optional[str] = None


class CreateSessionIn(BaseModel):
    documents: list[DocumentIn]


class RefineIn(BaseModel):
    include: list[int] = Field(default_factory=list)
    exclude: list[int] = Field(default_factory=list)
    freeform: Optional[str] = None


class EvaluateIn(BaseModel):
    version: Optional[int] = None


def _json_response(payload, status_code: int = 200) -> Response:
    return Response(content=canonical_json(payload), status_code=status_code,
                    media_type="application/json")


def _error(status_code: int, message: str) -> Response:
    return _json_response({"error": message}, status_code=status_code)


def create_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="summpilot", docs_url=None, redoc_url=None)
    store = SessionStore(config.data_dir)
    gateway = LlmGateway.from_config(config.provider)
    app.state.store = store
    app.state.gateway = gateway

    @app.middleware("http")
    async def log_requests(request: Request, call_next):
        started = time.monotonic()
        response = await call_next(request)
        logger.info(
            "request method=%s path=%s status=%d duration_ms=%.1f",
            request.method, request.url.path, response.status_code,
            (time.monotonic() - started) * 1000,
        )
        return response

    @app.post("/sessions")
    def create_session(body: CreateSessionIn):
        if not body.documents:
            return _error(400, "at least one document is required")
        if len(body.documents) > MAX_DOCUMENTS:
            return _error(400, f"at most {MAX_DOCUMENTS} documents per session")
        try:
            docset = make_document_set(
                bodies=[d.body for d in body.documents],
                titles=[d.title for d in body.documents],
            )
        except InputError as exc:
            return _error(400, str(exc))
        oversize = [d.id for d in docset.documents if len(d.body) > MAX_DOCUMENT_CHARS]
        if oversize:
            return _error(
                400, f"documents exceed {MAX_DOCUMENT_CHARS} characters: {oversize}"
            )
        session = store.create(docset)
        return _json_response({"session_id": session.id}, status_code=201)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        session = store.get(session_id)
        if session is None:
            return _error(404, "unknown session")
        with store.lock(session_id):
            return _json_response(session.to_dict())

    @app.post("/sessions/{session_id}/analyze")
    def analyze(session_id: str):
        session = store.get(session_id)
        if session is None:
            return _error(404, "unknown session")
        with store.lock(session_id):
            if session.phase is not Phase.CREATED:
                return _error(409, f"analyze requires phase 'created', session is '{session.phase.value}'")
            try:
                triples, warnings = extract_triples(gateway, session.docset)
                triples, clusters, cluster_warnings = cluster_entities(
                    gateway, session.docset, triples
                )
            except (ProviderError, ProtocolError, ExtractionEmptyError) as exc:
                return _error(502, f"provider failure during analysis: {exc}")
            graph = graph_to_dict(build_graph(triples, clusters, session.docset))
            session.triples = triples
            session.clusters = clusters
            session.graph = graph
            session.warnings.extend(w.to_dict() for w in warnings + cluster_warnings)
            session.phase = Phase.ANALYZED
            store.save(session)
            return _json_response({
                "triples": [triple_to_dict(t, index=i) for i, t in enumerate(triples)],
                "clusters": [cluster_to_dict(c) for c in clusters],
                "graph": graph,
                "warnings": session.warnings,
            })

    @app.post("/sessions/{session_id}/summarize")
    def summarize(session_id: str):
        session = store.get(session_id)
        if session is None:
            return _error(404, "unknown session")
        with store.lock(session_id):
            if session.phase is not Phase.ANALYZED:
                return _error(409, f"summarize requires phase 'analyzed', session is '{session.phase.value}'")
            try:
                dialogue, summary, warnings = summarize_auto(gateway, session.docset)
            except (ProviderError, ProtocolError, EmptySummaryError) as exc:
                return _error(502, f"provider failure during summarization: {exc}")
            session.dialogue = dialogue
            session.summaries = [summary]
            session.warnings.extend(w.to_dict() for w in warnings)
            session.phase = Phase.SUMMARIZED
            store.save(session)
            return _json_response({"summary": summary_to_dict(summary)})

    @app.post("/sessions/{session_id}/refine")
    def refine(session_id: str, body: RefineIn):
        session = store.get(session_id)
        if session is None:
            return _error(404, "unknown session")
        with store.lock(session_id):
            if session.phase is not Phase.SUMMARIZED:
                return _error(409, f"refine requires phase 'summarized', session is '{session.phase.value}'")
            next_version = len(session.summaries)
            try:
                request = RefinementRequest(
                    id=next_version,
                    include=frozenset(body.include),
                    exclude=frozenset(body.exclude),
                    freeform=body.freeform,
                )
                summary, warnings = refine_summary(
                    gateway, session.dialogue, request, session.triples, next_version
                )
            except (ConstraintConflictError, ValidationError, InputError) as exc:
                return _error(400, str(exc))
            except (ProviderError, ProtocolError, EmptySummaryError) as exc:
                return _error(502, f"provider failure during refinement: {exc}")
            session.summaries.append(summary)
            session.warnings.extend(w.to_dict() for w in warnings)
            store.save(session)
            return _json_response({"summary": summary_to_dict(summary)})

    @app.post("/sessions/{session_id}/evaluate")
    def evaluate_endpoint(session_id: str, body: EvaluateIn | None = None):
        session = store.get(session_id)
        if session is None:
            return _error(404, "unknown session")
        with store.lock(session_id):
            if not session.summaries:
                return _error(409, "evaluate requires at least one summary")
            version = body.version if body and body.version is not None else len(session.summaries) - 1
            if version < 0 or version >= len(session.summaries):
                return _error(404, f"no summary version {version}")
            if version in session.reports:
                return _json_response(session.reports[version])
            try:
                report, warnings = evaluate(
                    gateway, session.docset, session.summaries[version],
                    parallelism=config.verify_parallelism,
                )
            except (ProviderError, ProtocolError, EmptySummaryError) as exc:
                return _error(502, f"provider failure during evaluation: {exc}")
            session.reports[version] = report.to_dict()
            session.warnings.extend(w.to_dict() for w in warnings)
            store.save(session)
            return _json_response(session.reports[version])

    if config.ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.ui_dir, html=True), name="ui")

    return app
