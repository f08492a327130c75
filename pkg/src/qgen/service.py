"""HTTP API mirroring the interactive exploration flow: upload or pick a
dataset, create a session with a question limit, read ranked questions,
select to re-rank, search, save and resume.

Engine results depend only on (dataset bytes, config, selection history), so
replaying the same call sequence reproduces identical responses.  Mutating
endpoints are idempotent per ``X-Request-Id`` header when supplied.
"""

from __future__ import annotations

import uuid
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from .dataset import Dataset, IngestOptions, load_dataset
from .engine import EngineConfig, ExplorationSession
from .errors import (CorruptSnapshot, DatasetMismatch, IngestError,
                     NoEligibleColumns, QgenError, UnknownQuestion,
                     VersionMismatch)
from .questions import QuestionCandidate
from .ranking import question_weight


def _column_summary(dataset: Dataset) -> list[dict]:
    out = []
    for col in dataset.columns:
        entry: dict = {
            "name": col.name,
            "kind": col.kind,
            "null_count": col.stats.null_count,
            "distinct_count": col.stats.distinct_count,
        }
        if col.stats.numeric:
            st = col.stats.numeric
            entry["numeric"] = {
                "min": st.minimum, "max": st.maximum, "mean": st.mean,
                "std": st.std, "q1": st.q1, "q2": st.q2, "q3": st.q3,
            }
        if col.stats.categorical is not None:
            top = sorted(col.stats.categorical.items(), key=lambda kv: (-kv[1], kv[0]))[:10]
            entry["top_values"] = [{"value": v, "count": c} for v, c in top]
        if col.stats.date:
            st = col.stats.date
            entry["date"] = {"min": st.minimum.isoformat(), "max": st.maximum.isoformat(),
                             "median": st.median.isoformat()}
        out.append(entry)
    return out


def _question_payload(q: QuestionCandidate, rank: int, weight: Optional[float] = None) -> dict:
    payload = {
        "rank": rank,
        "id": q.id,
        "text": q.surface_text,
        "score": q.score,
        "columns": list(q.columns),
        "operators": dict(q.operator_map),
        "slot_values": list(q.slot_values),
    }
    if weight is not None:
        payload["weight"] = weight
    return payload


def _error(status: int, name: str, detail: str = "") -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": name, "detail": detail})


class ServiceState:
    def __init__(self, catalog_dir: Optional[str] = None):
        self.catalog_dir = Path(catalog_dir) if catalog_dir else None
        self.datasets: dict[str, Dataset] = {}
        self.dataset_order: list[str] = []
        self.sessions: dict[str, ExplorationSession] = {}
        self.idempotency: dict[tuple[str, str], dict] = {}
        self._loaded_paths: dict[str, str] = {}  # catalog path -> dataset_id

    def register(self, dataset: Dataset) -> str:
        dataset_id = uuid.uuid4().hex
        self.datasets[dataset_id] = dataset
        self.dataset_order.append(dataset_id)
        return dataset_id

    def load_catalog_dir(self) -> list[dict]:
        """Sync the registry with the catalog directory; returns warning
        entries for files that could not be ingested."""
        warnings: list[dict] = []
        if self.catalog_dir is None or not self.catalog_dir.is_dir():
            return warnings
        for path in sorted(self.catalog_dir.iterdir(), key=lambda p: p.name):
            if not path.is_file() or path.suffix.lower() not in (".csv", ".tsv", ".txt"):
                continue
            if str(path) in self._loaded_paths:
                continue
            try:
                options = IngestOptions(delimiter="\t" if path.suffix.lower() == ".tsv" else ",")
                dataset = load_dataset(path, options)
            except (IngestError, OSError, UnicodeDecodeError) as exc:
                warnings.append({"name": path.name, "warning": f"{type(exc).__name__}: {exc}"})
                continue
            self._loaded_paths[str(path)] = self.register(dataset)
        return warnings


def create_app(catalog_dir: Optional[str] = None,
               cors_origins: tuple[str, ...] = ("*",)) -> FastAPI:
    app = FastAPI(title="qgen", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )
    state = ServiceState(catalog_dir)
    app.state.engine = state

    def idempotent(request: Request, compute):
        request_id = request.headers.get("x-request-id")
        if request_id:
            key = (request.url.path, request_id)
            if key in state.idempotency:
                return JSONResponse(state.idempotency[key])
            result = compute()
            if isinstance(result, JSONResponse):
                return result  # errors are not cached
            state.idempotency[key] = result
            return JSONResponse(result)
        result = compute()
        return result if isinstance(result, JSONResponse) else JSONResponse(result)

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/catalog")
    def catalog():
        warnings = state.load_catalog_dir()
        entries = [
            {
                "dataset_id": dataset_id,
                "name": state.datasets[dataset_id].name,
                "row_count": state.datasets[dataset_id].row_count,
                "columns": [
                    {"name": c.name, "kind": c.kind}
                    for c in state.datasets[dataset_id].columns
                ],
            }
            for dataset_id in state.dataset_order
        ]
        entries.sort(key=lambda e: e["name"])
        return {"datasets": entries + warnings}

    @app.post("/datasets")
    async def upload_dataset(request: Request,
                             name: Optional[str] = None,
                             delimiter: str = ",",
                             date_format: list[str] = Query(default=None),
                             numeric_threshold: float = 0.9,
                             id_threshold: float = 0.95):
        def compute():
            body = body_bytes
            if not body:
                return _error(400, "EmptyInput", "request body is empty")
            options = IngestOptions(
                delimiter=delimiter,
                date_formats=tuple(date_format) if date_format else IngestOptions().date_formats,
                numeric_threshold=numeric_threshold,
                id_threshold=id_threshold,
                name=name,
            )
            try:
                dataset = load_dataset(body, options)
            except IngestError as exc:
                return _error(400, type(exc).__name__, str(exc))
            dataset_id = state.register(dataset)
            return {
                "dataset_id": dataset_id,
                "content_hash": dataset.content_hash,
                "profile": {
                    "name": dataset.name,
                    "row_count": dataset.row_count,
                    "columns": _column_summary(dataset),
                },
            }

        body_bytes = await request.body()
        return idempotent(request, compute)

    @app.post("/sessions")
    async def create_session(request: Request):
        payload = await request.json()

        def compute():
            dataset_id = payload.get("dataset_id")
            if dataset_id not in state.datasets:
                return _error(404, "UnknownDataset", f"no dataset {dataset_id!r}")
            limit = payload.get("question_limit", 500)
            if not isinstance(limit, int) or limit < 1:
                return _error(400, "BadQuestionLimit", "question_limit must be >= 1")
            try:
                config = EngineConfig.from_dict(payload.get("config") or {})
            except (TypeError, ValueError) as exc:
                return _error(400, "BadConfig", str(exc))
            try:
                session = ExplorationSession.create(
                    state.datasets[dataset_id], config, question_limit=limit)
            except NoEligibleColumns as exc:
                return _error(400, "NoEligibleColumns", str(exc))
            session.state.dataset_id = dataset_id
            state.sessions[session.state.session_id] = session
            return {
                "session_id": session.state.session_id,
                "question_count": session.question_count,
                "status": "ready",
            }

        return idempotent(request, compute)

    @app.get("/sessions/{session_id}/status")
    def session_status(session_id: str):
        if session_id not in state.sessions:
            return _error(404, "UnknownSession", session_id)
        return {"session_id": session_id, "status": "ready"}

    @app.get("/sessions/{session_id}/questions")
    def session_questions(session_id: str, top: int = 10):
        if session_id not in state.sessions:
            return _error(404, "UnknownSession", session_id)
        session = state.sessions[session_id]
        ranked = session.top(top)
        weights = None
        if session.iteration > 0:
            weights = [question_weight(session.state, q) for q in ranked]
        return {
            "session_id": session_id,
            "iteration": session.iteration,
            "question_count": session.question_count,
            "questions": [
                _question_payload(q, i + 1, weights[i] if weights else None)
                for i, q in enumerate(ranked)
            ],
        }

    @app.post("/sessions/{session_id}/select")
    async def select_question(session_id: str, request: Request, top: int = 10):
        payload = await request.json()

        def compute():
            if session_id not in state.sessions:
                return _error(404, "UnknownSession", session_id)
            session = state.sessions[session_id]
            question_id = payload.get("question_id")
            try:
                session.select(question_id)
            except UnknownQuestion as exc:
                return _error(400, "UnknownQuestion", str(exc))
            ranked = session.top(top)
            return {
                "session_id": session_id,
                "iteration": session.iteration,
                "probabilities": session.probabilities(),
                "questions": [
                    _question_payload(q, i + 1, question_weight(session.state, q))
                    for i, q in enumerate(ranked)
                ],
            }

        return idempotent(request, compute)

    @app.post("/sessions/{session_id}/pin")
    async def pin_column(session_id: str, request: Request, top: int = 10):
        payload = await request.json()

        def compute():
            if session_id not in state.sessions:
                return _error(404, "UnknownSession", session_id)
            session = state.sessions[session_id]
            column = payload.get("column")
            try:
                session.pin_column(column)
            except UnknownQuestion as exc:
                return _error(400, "UnknownColumn", str(exc))
            ranked = session.top(top)
            return {
                "session_id": session_id,
                "iteration": session.iteration,
                "probabilities": session.probabilities(),
                "questions": [
                    _question_payload(q, i + 1, question_weight(session.state, q))
                    for i, q in enumerate(ranked)
                ],
            }

        return idempotent(request, compute)

    @app.get("/sessions/{session_id}/search")
    def search(session_id: str, q: str = "", limit: int = 10):
        if session_id not in state.sessions:
            return _error(404, "UnknownSession", session_id)
        session = state.sessions[session_id]
        matches = session.search(q, limit)
        return {
            "session_id": session_id,
            "query": q,
            "matches": [_question_payload(m, i + 1) for i, m in enumerate(matches)],
        }

    @app.post("/sessions/{session_id}/save")
    def save_session(session_id: str):
        if session_id not in state.sessions:
            return _error(404, "UnknownSession", session_id)
        document = state.sessions[session_id].to_snapshot()
        return PlainTextResponse(document, media_type="application/json")

    @app.post("/sessions/resume")
    async def resume_session(request: Request):
        document = (await request.body()).decode("utf-8")

        def compute():
            from .session import parse_snapshot
            try:
                doc = parse_snapshot(document)
            except (CorruptSnapshot, VersionMismatch) as exc:
                return _error(400, type(exc).__name__, str(exc))
            wanted_hash = doc["dataset"]["content_hash"]
            state.load_catalog_dir()
            dataset_id = next(
                (i for i in state.dataset_order
                 if state.datasets[i].content_hash == wanted_hash), None)
            if dataset_id is None:
                return _error(409, "DatasetMismatch",
                              "no registered dataset matches the snapshot's content hash")
            try:
                session = ExplorationSession.resume(document, state.datasets[dataset_id])
            except DatasetMismatch as exc:
                return _error(409, "DatasetMismatch", str(exc))
            except QgenError as exc:
                return _error(400, type(exc).__name__, str(exc))
            session.state.session_id = uuid.uuid4().hex
            session.state.dataset_id = dataset_id
            state.sessions[session.state.session_id] = session
            return {
                "session_id": session.state.session_id,
                "dataset_id": dataset_id,
                "question_count": session.question_count,
                "iteration": session.iteration,
                "status": "ready",
            }

        return idempotent(request, compute)

    return app
