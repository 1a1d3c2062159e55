"""Local triage service over a GenStore.

Endpoints:
    GET  /api/pending?offset=&limit=   next pending curation records
    GET  /api/image/{image_id}         stored PNG bytes
    POST /api/decision                 {image_id, decision, reason, reviewer?}
    GET  /api/summary                  selection report + reason taxonomy

When a UI directory is given, its built assets are served at the root.
"""

from __future__ import annotations

from dataclasses import asdict
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import FileResponse, JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from ..errors import InputError
from .store import CURATION_REASONS, GenStore


class DecisionBody(BaseModel):
    image_id: str = Field(min_length=1)
    decision: str
    reason: str = "none"
    reviewer: str = ""


def create_app(store: GenStore, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="oxkit triage service")

    @app.get("/api/pending")
    def pending(offset: int = 0, limit: int = 50) -> JSONResponse:
        if offset < 0 or limit < 1:
            raise HTTPException(status_code=400, detail="offset must be >= 0 and limit >= 1")
        total, page = store.pending(offset=offset, limit=limit)
        return JSONResponse(
            {
                "total_pending": total,
                "offset": offset,
                "limit": limit,
                "items": [
                    {"image_id": r.image_id, "backend": r.backend, "prompt": r.prompt}
                    for r in page
                ],
            }
        )

    @app.get("/api/image/{image_id}")
    def image(image_id: str) -> FileResponse:
        try:
            path = store.image_path(image_id)
        except InputError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        return FileResponse(path, media_type="image/png")

    @app.post("/api/decision")
    def decision(body: DecisionBody) -> JSONResponse:
        try:
            rec = store.record_decision(
                body.image_id, body.decision, body.reason, reviewer=body.reviewer
            )
        except InputError as exc:
            status = 404 if "unknown image id" in str(exc) else 400
            raise HTTPException(status_code=status, detail=str(exc)) from exc
        return JSONResponse(asdict(rec))

    @app.get("/api/summary")
    def summary() -> JSONResponse:
        rows = store.selection_report(group_by="backend")
        generated = sum(r.generated for r in rows)
        kept = sum(r.kept for r in rows)
        discarded = sum(r.discarded for r in rows)
        pending_count = generated - kept - discarded
        return JSONResponse(
            {
                "overall": {
                    "generated": generated,
                    "kept": kept,
                    "discarded": discarded,
                    "pending": pending_count,
                    "fraction": (kept / generated) if generated else None,
                },
                "by_backend": [asdict(r) for r in rows],
                "discard_reason_counts": store.discard_reason_counts(),
                "reasons": [r for r in CURATION_REASONS if r != "none"],
                "total_cost_cents": store.total_cost_cents(),
            }
        )

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
