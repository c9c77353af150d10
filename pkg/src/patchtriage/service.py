"""HTTP service for annotation and triage queries.

Serves the annotation frontend and external tooling over plain JSON:
fetching unlabeled patches, submitting manual labels, retraining the
classifier from the current labels, predicting categories for new
summaries, and reading per-category statistics and label mismatches.

Write discipline: the dataset is file-backed, so all label mutations
serialize through one lock and are persisted with a write-temp-then-rename
before the request is acknowledged. Every accepted label also appends one
line to an append-only audit log. Retraining is synchronous and exclusive:
a second concurrent train request is rejected with 409 rather than queued,
keeping model versions deterministic.

Error mapping: InvalidCategory/SchemaError/empty input 400, unknown patch
404, concurrent retrain 409, too few labeled categories 422, no dataset or
no model loaded 503.
"""

import datetime
import json
import os
import threading
import warnings
from dataclasses import asdict, dataclass

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import pipeline
from .augment import TemplateSet, default_templates, load_templates
from .clustering import ClusterModel, load_model, save_model
from .dataset import (
    PatchRecord,
    labeled_summaries_from_records,
    load_records,
    save_records,
    update_record,
)
from .errors import (
    Busy,
    DegenerateSeeding,
    EmptySummary,
    EmptyText,
    ExcludedRecordWarning,
    InvalidCategory,
    NotFound,
    NotReady,
    PatchTriageError,
    SchemaError,
)
from .taxonomy import check_category, export_taxonomy
from .triage import accumulate_stats, mismatch_matrix, render_mismatches

_STATUS_BY_ERROR = (
    (NotFound, 404),
    (Busy, 409),
    (DegenerateSeeding, 422),
    (NotReady, 503),
    (InvalidCategory, 400),
    (SchemaError, 400),
    (EmptySummary, 400),
    (EmptyText, 400),
)


@dataclass
class ServiceConfig:
    dataset_path: str | None = None
    dataset_format: str = "jsonl"
    model_path: str | None = None
    templates_path: str | None = None
    audit_path: str | None = None
    seed: int = 42
    per_category_target: int = pipeline.DEFAULT_PER_CATEGORY_TARGET
    split_ratio: float = pipeline.DEFAULT_SPLIT_RATIO
    embed_endpoint: str | None = None


class _State:
    """Mutable service state: the dataset snapshot and the current model."""

    def __init__(self, config: ServiceConfig):
        self.config = config
        self.write_lock = threading.Lock()
        self.retrain_lock = threading.Lock()
        self.records: list[PatchRecord] | None = None
        self.by_id: dict[str, int] = {}
        self.model: ClusterModel | None = None
        self.templates: TemplateSet = (
            load_templates(config.templates_path)
            if config.templates_path
            else default_templates()
        )
        if config.dataset_path:
            self._set_records(load_records(config.dataset_path, config.dataset_format))
        if config.model_path and os.path.exists(config.model_path):
            self.model = load_model(config.model_path)
        if config.embed_endpoint:
            self.embedder = pipeline.remote_embedder(config.embed_endpoint)
        else:
            self.embedder = pipeline.hashed_embedder()

    def _set_records(self, records: list[PatchRecord]) -> None:
        self.records = records
        self.by_id = {rec.patch_id: i for i, rec in enumerate(records)}

    def require_records(self) -> list[PatchRecord]:
        if self.records is None:
            raise NotReady("no dataset loaded; start the service with a dataset path")
        return self.records

    def require_model(self) -> ClusterModel:
        if self.model is None:
            raise NotReady("no model loaded or trained yet")
        return self.model

    def audit_path(self) -> str | None:
        if self.config.audit_path:
            return self.config.audit_path
        if self.config.dataset_path:
            return f"{self.config.dataset_path}.audit.jsonl"
        return None

    def persist_records(self) -> None:
        path = self.config.dataset_path
        if not path:
            return
        tmp = f"{path}.tmp"
        save_records(self.records, tmp, self.config.dataset_format)
        os.replace(tmp, path)

    def append_audit(self, entry: dict) -> None:
        path = self.audit_path()
        if not path:
            return
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry, ensure_ascii=False) + "\n")
            fh.flush()

    def label(self, patch_id: str, category: int, annotator: str) -> PatchRecord:
        check_category(category)
        with self.write_lock:
            records = self.require_records()
            index = self.by_id.get(patch_id)
            if index is None:
                raise NotFound(f"no patch with id {patch_id!r}")
            updated = update_record(records[index], category_manual=category)
            new_records = list(records)
            new_records[index] = updated
            self._set_records(new_records)
            self.persist_records()
            self.append_audit(
                {
                    "patch_id": patch_id,
                    "category": category,
                    "annotator": annotator,
                    "timestamp": _now(),
                }
            )
            return updated

    def retrain(self) -> dict:
        if not self.retrain_lock.acquire(blocking=False):
            raise Busy("a retrain is already in progress")
        try:
            with self.write_lock:
                records = list(self.require_records())
            seeds = labeled_summaries_from_records(records, "manual")
            result = pipeline.train_from_summaries(
                seeds,
                self.templates,
                per_category_target=self.config.per_category_target,
                seed=self.config.seed,
                ratio=self.config.split_ratio,
                embedder=self.embedder,
            )
            if self.config.model_path:
                save_model(result.model, self.config.model_path)
            self.model = result.model
            return result.report
        finally:
            self.retrain_lock.release()


def _now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")


class LabelBody(BaseModel):
    category: int
    annotator: str = "anonymous"


class PredictBody(BaseModel):
    summary: str


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    state = _State(config or ServiceConfig())
    app = FastAPI(title="patchtriage", docs_url=None, redoc_url=None)
    app.state.patchtriage = state

    @app.exception_handler(PatchTriageError)
    async def _domain_error(request: Request, exc: PatchTriageError):
        status = 400
        for klass, code in _STATUS_BY_ERROR:
            if isinstance(exc, klass):
                status = code
                break
        return JSONResponse(
            status_code=status,
            content={"error": type(exc).__name__, "detail": str(exc)},
        )

    @app.get("/api/taxonomy")
    def taxonomy():
        return export_taxonomy()

    @app.get("/api/patches/next")
    def next_patch(unlabeled: bool = True):
        records = state.require_records()
        for record in records:
            if not unlabeled or record.category_manual is None:
                return asdict(record)
        return Response(status_code=204)

    @app.get("/api/patches/{patch_id}")
    def get_patch(patch_id: str):
        records = state.require_records()
        index = state.by_id.get(patch_id)
        if index is None:
            raise NotFound(f"no patch with id {patch_id!r}")
        return asdict(records[index])

    @app.post("/api/patches/{patch_id}/label")
    def label_patch(patch_id: str, body: LabelBody):
        return asdict(state.label(patch_id, body.category, body.annotator))

    @app.post("/api/train")
    def train():
        return state.retrain()

    @app.post("/api/predict")
    def predict(body: PredictBody):
        model = state.require_model()
        return pipeline.predict_summary(model, body.summary, embedder=state.embedder)

    @app.get("/api/stats")
    def stats(by: str = "auto"):
        if by not in ("auto", "manual"):
            raise HTTPException(status_code=400, detail="by must be 'auto' or 'manual'")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ExcludedRecordWarning)
            return accumulate_stats(state.require_records(), by).to_json()

    @app.get("/api/mismatches")
    def mismatches():
        return render_mismatches(mismatch_matrix(state.require_records()))

    return app


def serve(config: ServiceConfig, host: str = "127.0.0.1", port: int = 8080) -> None:
    """Run the service under uvicorn (blocking)."""
    import uvicorn

    uvicorn.run(create_app(config), host=host, port=port, log_level="warning")
