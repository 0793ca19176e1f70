"""Desk-scale screening service: ingest session logs, gate on test
conditions, classify, and persist every outcome.

Storage is a directory of append-only JSON documents, one per session and
one per (session, model version) result, written atomically.  The active
model and calibration swap atomically and survive restarts.  Screening
always runs the condition detector before the classifier; unsuitable
sessions are never classified.
"""

from __future__ import annotations

import datetime
import json
import os
import threading
from collections import defaultdict
from pathlib import Path
from typing import Any, Final

from . import c45
from .detector import CohortStats, detect_condition, stats_from_json
from .errors import (
    ModelFormatError,
    SchemaError,
    ServiceNotReadyError,
    SessionConflictError,
)
from .features import extract_session
from .model import GameStage, parse_session_document, validate_session_document

RESULT_SCHEMA_VERSION: Final = 1

VERDICT_UNSUITABLE: Final = "unsuitable_conditions"
VERDICT_AT_RISK: Final = "at_risk_dysgraphia"
VERDICT_TYPICAL: Final = "typical"

_LABEL_VERDICTS: Final = {"dysgraphic": VERDICT_AT_RISK, "normal": VERDICT_TYPICAL}


def _write_atomic(path: Path, doc: Any) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    os.replace(tmp, path)


class ScreeningStore:
    """Filesystem layout for sessions, results, artifacts, and the audit log."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        for sub in ("sessions", "results", "artifacts"):
            (self.root / sub).mkdir(parents=True, exist_ok=True)

    def _session_path(self, session_id: str) -> Path:
        return self.root / "sessions" / f"{session_id}.json"

    def _result_path(self, session_id: str, model_version: str) -> Path:
        return self.root / "results" / f"{session_id}__{model_version}.json"

    def save_session(self, session_id: str, doc: Any) -> None:
        _write_atomic(self._session_path(session_id), doc)

    def get_session(self, session_id: str) -> Any | None:
        path = self._session_path(session_id)
        if not path.exists():
            return None
        return json.loads(path.read_text())

    def save_result(self, session_id: str, model_version: str, result: Any) -> None:
        _write_atomic(self._result_path(session_id, model_version), result)

    def get_result(self, session_id: str, model_version: str) -> Any | None:
        path = self._result_path(session_id, model_version)
        if not path.exists():
            return None
        return json.loads(path.read_text())

    def save_artifact(self, name: str, doc: Any) -> None:
        _write_atomic(self.root / "artifacts" / f"{name}.json", doc)

    def load_artifact(self, name: str) -> Any | None:
        path = self.root / "artifacts" / f"{name}.json"
        if not path.exists():
            return None
        return json.loads(path.read_text())

    def append_audit(self, entry: dict[str, Any]) -> None:
        with open(self.root / "audit.log", "a") as fh:
            fh.write(json.dumps(entry, sort_keys=True) + "\n")

    def read_audit(self) -> list[dict[str, Any]]:
        path = self.root / "audit.log"
        if not path.exists():
            return []
        return [json.loads(line) for line in path.read_text().splitlines() if line]

    def session_count(self) -> int:
        return sum(1 for _ in (self.root / "sessions").glob("*.json"))


class ScreeningService:
    """Screening pipeline bound to a store, with atomic artifact swaps."""

    def __init__(self, store: ScreeningStore):
        self.store = store
        self._swap_lock = threading.RLock()
        self._session_locks: dict[str, threading.Lock] = defaultdict(threading.Lock)
        self._model_doc: dict[str, Any] | None = None
        self._tree: c45.DecisionTree | None = None
        self._stats: CohortStats | None = None
        model_doc = store.load_artifact("model")
        if model_doc is not None:
            self.load_model(model_doc)
        stats_doc = store.load_artifact("calibration")
        if stats_doc is not None:
            self.load_calibration(stats_doc)

    # -- admin ---------------------------------------------------------------

    def load_model(self, doc: Any) -> str:
        """Validate and activate a model document; the active model is
        untouched if validation fails."""
        tree = c45.tree_from_json(doc)
        version = doc.get("model_version")
        if not isinstance(version, str) or not version:
            raise ModelFormatError("model document must carry a model_version")
        with self._swap_lock:
            self.store.save_artifact("model", doc)
            self._model_doc = doc
            self._tree = tree
        return version

    def load_calibration(self, doc: Any) -> None:
        stats = stats_from_json(doc)
        with self._swap_lock:
            self.store.save_artifact("calibration", doc)
            self._stats = stats

    def health(self) -> dict[str, Any]:
        with self._swap_lock:
            model_version = self._model_doc.get("model_version") if self._model_doc else None
            calibration_loaded = self._stats is not None
        ready = model_version is not None and calibration_loaded
        return {
            "status": "ready" if ready else "not_ready",
            "model_version": model_version,
            "calibration_loaded": calibration_loaded,
            "sessions_stored": self.store.session_count(),
        }

    # -- sessions ------------------------------------------------------------

    def ingest(self, doc: Any) -> str:
        """Validate and persist a session document; idempotent per session id."""
        violations = validate_session_document(doc)
        if violations:
            raise SchemaError(violations)
        session_id = doc["session_id"]
        with self._session_locks[session_id]:
            existing = self.store.get_session(session_id)
            if existing is not None:
                if existing != doc:
                    raise SessionConflictError(
                        f"session {session_id!r} already stored with different content"
                    )
                return session_id
            self.store.save_session(session_id, doc)
        return session_id

    def screen(self, session_id: str) -> dict[str, Any]:
        """Screen a stored session, detector gate first.

        Re-screening under the same model version returns the stored result
        unchanged.
        """
        with self._swap_lock:
            tree, stats = self._tree, self._stats
            model_doc = self._model_doc
        if tree is None or stats is None or model_doc is None:
            raise ServiceNotReadyError("model and calibration must be loaded before screening")
        model_version = model_doc["model_version"]

        with self._session_locks[session_id]:
            doc = self.store.get_session(session_id)
            if doc is None:
                raise KeyError(f"unknown session: {session_id!r}")
            stored = self.store.get_result(session_id, model_version)
            if stored is not None:
                return stored

            records = parse_session_document(doc).records()
            verdict = detect_condition(records[GameStage.GAME1], stats)
            self.store.append_audit(
                {
                    "session_id": session_id,
                    "step": "detector",
                    "suitable": verdict.suitable,
                    "reason": verdict.reason.value,
                    "model_version": model_version,
                }
            )
            result: dict[str, Any] = {
                "schema_version": RESULT_SCHEMA_VERSION,
                "session_id": session_id,
                "detector_reason": verdict.reason.value,
                "model_version": model_version,
                "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            }
            if not verdict.suitable:
                result["verdict"] = VERDICT_UNSUITABLE
            else:
                features = extract_session(records)
                predicted = c45.predict(tree, features)
                self.store.append_audit(
                    {
                        "session_id": session_id,
                        "step": "classifier",
                        "predicted": predicted,
                        "model_version": model_version,
                    }
                )
                result["verdict"] = _LABEL_VERDICTS[predicted]
                result["feature_vector"] = list(features)
            self.store.save_result(session_id, model_version, result)
            return result

    def result(self, session_id: str) -> dict[str, Any] | None:
        """The stored result for the active model version, if any."""
        with self._swap_lock:
            model_doc = self._model_doc
        if model_doc is None:
            raise ServiceNotReadyError("no model loaded")
        return self.store.get_result(session_id, model_doc["model_version"])


def create_app(service: ScreeningService):
    """HTTP facade over a ScreeningService."""
    from fastapi import Body, FastAPI
    from fastapi.responses import JSONResponse

    app = FastAPI(title="gamescreen", docs_url=None, redoc_url=None)

    @app.post("/sessions", status_code=201)
    def ingest(payload: dict = Body(...)):
        try:
            session_id = service.ingest(payload)
        except SchemaError as exc:
            return JSONResponse({"violations": exc.violations}, status_code=422)
        except SessionConflictError as exc:
            return JSONResponse({"error": str(exc)}, status_code=409)
        return {"session_id": session_id}

    @app.post("/sessions/{session_id}/screen")
    def screen(session_id: str):
        try:
            return service.screen(session_id)
        except KeyError as exc:
            return JSONResponse({"error": str(exc)}, status_code=404)
        except ServiceNotReadyError as exc:
            return JSONResponse({"error": str(exc)}, status_code=503)

    @app.get("/sessions/{session_id}/result")
    def result(session_id: str):
        try:
            stored = service.result(session_id)
        except ServiceNotReadyError as exc:
            return JSONResponse({"error": str(exc)}, status_code=503)
        if stored is None:
            return JSONResponse({"error": f"no result for {session_id!r}"}, status_code=404)
        return stored

    @app.put("/admin/model")
    def load_model(payload: dict = Body(...)):
        try:
            version = service.load_model(payload)
        except ModelFormatError as exc:
            return JSONResponse({"error": str(exc)}, status_code=422)
        return {"model_version": version}

    @app.put("/admin/calibration")
    def load_calibration(payload: dict = Body(...)):
        try:
            service.load_calibration(payload)
        except ModelFormatError as exc:
            return JSONResponse({"error": str(exc)}, status_code=422)
        return {"status": "loaded"}

    @app.get("/health")
    def health():
        return service.health()

    return app
