"""Session snapshots: save an exploration session to a ``.qsession`` document
and restore it against the same dataset.

The document is human-inspectable JSON with ``format_version`` as its first
key; the dataset is bound by content hash so resuming against edited data is
rejected rather than silently producing stale questions.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .dataset import Dataset
from .errors import CorruptSnapshot, DatasetMismatch, IoFailure, VersionMismatch
from .questions import QuestionCandidate
from .ranking import SessionState

FORMAT_VERSION = 1
EXTENSION = ".qsession"


def snapshot_document(state: SessionState) -> str:
    """Serialize the state deterministically; two saves of the same state are
    byte-identical."""
    doc = {
        "format_version": FORMAT_VERSION,
        "session_id": state.session_id,
        "dataset": {
            "content_hash": state.dataset_hash,
            "name": state.dataset_name,
            "id": state.dataset_id,
        },
        "config": state.config,
        "selected_columns": list(state.selected_columns),
        "counters": state.counters,
        "history": list(state.history),
        "pinned_columns": list(state.pinned_columns),
        "iteration": state.iteration,
        "questions": [
            {
                "id": q.id,
                "columns": list(q.columns),
                "operator_map": q.operator_map,
                "template_text": q.template_text,
                "slot_values": list(q.slot_values),
                "surface_text": q.surface_text,
                "score": q.score,
                "valid": q.valid,
            }
            for q in state.questions
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def save_session(state: SessionState, destination) -> str:
    """Write the snapshot atomically (temp file + rename); returns the
    document text."""
    document = snapshot_document(state)
    path = Path(destination)
    try:
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(document, encoding="utf-8")
        os.replace(tmp, path)
    except OSError as exc:
        raise IoFailure(f"cannot write snapshot to {path}: {exc}") from exc
    return document


def parse_snapshot(document: str) -> dict:
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise CorruptSnapshot(f"snapshot is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "format_version" not in doc:
        raise CorruptSnapshot("snapshot lacks a format_version field")
    if doc["format_version"] != FORMAT_VERSION:
        raise VersionMismatch(
            f"snapshot format_version {doc['format_version']} != {FORMAT_VERSION}")
    required = {"session_id", "dataset", "counters", "history", "iteration", "questions"}
    missing = required - doc.keys()
    if missing:
        raise CorruptSnapshot(f"snapshot missing fields: {sorted(missing)}")
    return doc


def load_session(source, dataset: Dataset) -> SessionState:
    """Reconstruct a SessionState from a snapshot document, path or stream."""
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source
                                    and source.endswith(EXTENSION)):
        try:
            document = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise IoFailure(f"cannot read snapshot {source}: {exc}") from exc
    elif isinstance(source, str):
        document = source
    else:
        document = source.read()
    doc = parse_snapshot(document)
    if doc["dataset"]["content_hash"] != dataset.content_hash:
        raise DatasetMismatch(
            "snapshot was saved against a dataset with a different content hash")
    try:
        questions = [
            QuestionCandidate(
                id=q["id"],
                columns=tuple(q["columns"]),
                operator_map=dict(q["operator_map"]),
                template_text=q["template_text"],
                slot_values=tuple(q["slot_values"]),
                surface_text=q["surface_text"],
                score=float(q["score"]),
                valid=bool(q["valid"]),
                slice_ref=None,
            )
            for q in doc["questions"]
        ]
        state = SessionState(
            session_id=doc["session_id"],
            dataset_id=doc["dataset"].get("id", ""),
            dataset_hash=doc["dataset"]["content_hash"],
            dataset_name=doc["dataset"].get("name", dataset.name),
            selected_columns=list(doc.get("selected_columns") or doc["counters"].keys()),
            questions=questions,
            config=dict(doc.get("config", {})),
        )
        state.counters = {c: int(t) for c, t in doc["counters"].items()}
        state.history = list(doc["history"])
        state.pinned_columns = list(doc.get("pinned_columns", []))
        state.iteration = int(doc["iteration"])
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptSnapshot(f"snapshot fields are malformed: {exc}") from exc
    return state
