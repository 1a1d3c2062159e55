"""Image store, cost ledger, and curation ledger for generated imagery.

On-disk layout under the store root:

    images/{image_id}.png     generated rasters
    requests.jsonl            cost ledger, one entry per batch request
    curation.jsonl            append-only decision audit log
    curation_snapshot.json    compacted latest-state snapshot

Money is held as integer cents. Every generated image starts as a
``pending`` curation record, so kept + discarded + pending always equals
generated. Re-deciding overwrites the snapshot; both events stay in the
audit log (last writer wins). Ledger mutations are serialized through one
lock; reads work on snapshots.
"""

from __future__ import annotations

import csv
import io
import json
import threading
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from ..annotations import KIND_SYNTHETIC, SurveyImage
from ..errors import InputError
from .backends import GenRequest
from ..imaging.raster import load_png, save_png

DECISIONS = ("keep", "discard", "pending")
CURATION_REASONS = (
    "none",
    "perspective_mismatch",
    "unrealistic_animal",
    "colour_anomaly",
    "background_anomaly",
    "viewing_angle",
)
DEFAULT_UNIT_COST_CENTS = 2  # per image at 1024 px

DECISION_CSV_HEADER = ["image_id", "decision", "reason"]


@dataclass(frozen=True)
class CostEntry:
    request_id: str
    backend: str
    prompt: str
    n: int
    size: int
    unit_cost_cents: int
    total_cents: int


@dataclass(frozen=True)
class CurationRecord:
    image_id: str
    decision: str
    reason: str
    reviewer: str
    decided_at: float
    backend: str
    prompt: str
    seq: int

    def validate(self) -> "CurationRecord":
        if self.decision not in DECISIONS:
            raise InputError(f"unknown decision {self.decision!r}")
        if self.reason not in CURATION_REASONS:
            raise InputError(f"unknown reason {self.reason!r}")
        if self.decision in ("keep", "pending") and self.reason != "none":
            raise InputError(f"decision {self.decision!r} requires reason 'none'")
        return self


@dataclass(frozen=True)
class SelectionRow:
    group: str
    generated: int
    kept: int
    discarded: int
    pending: int
    fraction: float | None  # kept / generated; None when nothing generated


def format_fraction_pct(fraction: float | None) -> str:
    """Render a kept fraction the way the selection table does.

    Whole percents normally; one decimal when the value would otherwise
    display as 0% despite being nonzero; ``n/a`` when undefined.
    """
    if fraction is None:
        return "n/a"
    pct = fraction * 100.0
    if 0.0 < pct < 1.0:
        return f"{pct:.1f}%"
    return f"{int(pct + 0.5)}%"


class GenStore:
    """Persistent store for generated images plus both ledgers."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.images_dir = self.root / "images"
        self.requests_path = self.root / "requests.jsonl"
        self.curation_log_path = self.root / "curation.jsonl"
        self.snapshot_path = self.root / "curation_snapshot.json"
        self.images_dir.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._backend_locks: dict[str, threading.Lock] = {}
        self._records: dict[str, CurationRecord] = {}
        self._seq = 0
        self._load()

    # -- loading ----------------------------------------------------------

    def _load(self) -> None:
        if self.curation_log_path.exists():
            for line in self.curation_log_path.read_text(encoding="utf-8").splitlines():
                if not line.strip():
                    continue
                rec = CurationRecord(**json.loads(line)).validate()
                self._records[rec.image_id] = rec
                self._seq = max(self._seq, rec.seq)

    # -- generation -------------------------------------------------------

    def generate_batch(
        self,
        req: GenRequest,
        backend,
        unit_cost_cents: int = DEFAULT_UNIT_COST_CENTS,
        reviewer: str = "",
    ) -> tuple[list[SurveyImage], CostEntry]:
        """Run one batch request, persist the images, and append both ledgers.

        At most one batch is in flight per backend at a time.
        """
        backend_name = getattr(backend, "name", req.backend)
        with self._lock:
            gen_lock = self._backend_locks.setdefault(backend_name, threading.Lock())
        with gen_lock:
            rasters = backend.generate(req.prompt, req.n, req.size)
        if len(rasters) != req.n:
            raise InputError(f"backend returned {len(rasters)} image(s), expected {req.n}")
        with self._lock:
            request_id = f"req-{self._next_seq()}"
            entry = CostEntry(
                request_id=request_id,
                backend=getattr(backend, "name", req.backend),
                prompt=req.prompt,
                n=req.n,
                size=req.size,
                unit_cost_cents=unit_cost_cents,
                total_cents=req.n * unit_cost_cents,
            )
            self._append(self.requests_path, asdict(entry))
            images = []
            for i, raster in enumerate(rasters):
                image_id = f"{request_id}-img{i}"
                save_png(self.images_dir / f"{image_id}.png", raster)
                images.append(
                    SurveyImage(
                        id=image_id,
                        path=str(self.images_dir / f"{image_id}.png"),
                        width_px=raster.shape[1],
                        height_px=raster.shape[0],
                        kind=KIND_SYNTHETIC,
                        source_tag=entry.backend,
                    )
                )
                self._write_record(
                    CurationRecord(
                        image_id=image_id,
                        decision="pending",
                        reason="none",
                        reviewer=reviewer,
                        decided_at=time.time(),
                        backend=entry.backend,
                        prompt=req.prompt,
                        seq=self._next_seq(),
                    )
                )
            self._write_snapshot()
        return images, entry

    # -- curation ---------------------------------------------------------

    def record_decision(
        self, image_id: str, decision: str, reason: str = "none", reviewer: str = ""
    ) -> CurationRecord:
        """Decide (or re-decide) one image; the audit log keeps every event."""
        if decision not in ("keep", "discard"):
            raise InputError(f"decision must be keep or discard, got {decision!r}")
        with self._lock:
            old = self._records.get(image_id)
            if old is None:
                raise InputError(f"unknown image id {image_id!r}")
            rec = CurationRecord(
                image_id=image_id,
                decision=decision,
                reason=reason,
                reviewer=reviewer,
                decided_at=time.time(),
                backend=old.backend,
                prompt=old.prompt,
                seq=self._next_seq(),
            ).validate()
            self._write_record(rec)
            self._write_snapshot()
        return rec

    def image_raster(self, image_id: str) -> np.ndarray:
        path = self.images_dir / f"{image_id}.png"
        if image_id not in self._records or not path.exists():
            raise InputError(f"unknown image id {image_id!r}")
        return load_png(path)

    def image_path(self, image_id: str) -> Path:
        path = self.images_dir / f"{image_id}.png"
        if image_id not in self._records or not path.exists():
            raise InputError(f"unknown image id {image_id!r}")
        return path

    def records(self) -> list[CurationRecord]:
        with self._lock:
            return sorted(self._records.values(), key=lambda r: r.seq)

    def pending(self, offset: int = 0, limit: int = 50) -> tuple[int, list[CurationRecord]]:
        """Pending records in stable order: (total pending, one page)."""
        pend = [r for r in self.records() if r.decision == "pending"]
        return len(pend), pend[offset : offset + limit]

    def cost_entries(self) -> list[CostEntry]:
        entries = []
        if self.requests_path.exists():
            for line in self.requests_path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    entries.append(CostEntry(**json.loads(line)))
        return entries

    def total_cost_cents(self) -> int:
        return sum(e.total_cents for e in self.cost_entries())

    def selection_report(self, group_by: str = "backend") -> list[SelectionRow]:
        """Per-group generated/kept counts and the kept fraction."""
        if group_by not in ("backend", "prompt"):
            raise InputError(f"group_by must be backend or prompt, got {group_by!r}")
        buckets: dict[str, list[CurationRecord]] = {}
        for rec in self.records():
            buckets.setdefault(getattr(rec, group_by), []).append(rec)
        rows = []
        for group in sorted(buckets):
            recs = buckets[group]
            generated = len(recs)
            kept = sum(1 for r in recs if r.decision == "keep")
            discarded = sum(1 for r in recs if r.decision == "discard")
            pending = generated - kept - discarded
            rows.append(
                SelectionRow(
                    group=group,
                    generated=generated,
                    kept=kept,
                    discarded=discarded,
                    pending=pending,
                    fraction=(kept / generated) if generated else None,
                )
            )
        return rows

    def discard_reason_counts(self) -> dict[str, int]:
        counts = {r: 0 for r in CURATION_REASONS if r != "none"}
        for rec in self.records():
            if rec.decision == "discard" and rec.reason != "none":
                counts[rec.reason] += 1
        return counts

    # -- CSV import/export (the UI-free fallback path) ---------------------

    def export_decisions_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(DECISION_CSV_HEADER)
        for rec in self.records():
            if rec.decision != "pending":
                writer.writerow([rec.image_id, rec.decision, rec.reason])
        return out.getvalue()

    def import_decisions_csv(self, text: str, reviewer: str = "csv-import") -> int:
        reader = csv.reader(io.StringIO(text))
        try:
            header = next(reader)
        except StopIteration:
            raise InputError("decision csv: empty file") from None
        if [h.strip() for h in header] != DECISION_CSV_HEADER:
            raise InputError(f"decision csv: bad header {header!r}")
        applied = 0
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 3:
                raise InputError(f"decision csv line {line_no}: expected 3 fields")
            self.record_decision(row[0].strip(), row[1].strip(), row[2].strip() or "none", reviewer)
            applied += 1
        return applied

    # -- internals ----------------------------------------------------------

    def _next_seq(self) -> int:
        self._seq += 1
        return self._seq

    def _write_record(self, rec: CurationRecord) -> None:
        self._append(self.curation_log_path, asdict(rec))
        self._records[rec.image_id] = rec

    def _append(self, path: Path, doc: dict) -> None:
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(doc) + "\n")

    def _write_snapshot(self) -> None:
        snapshot = {
            "schema_version": 1,
            "kind": "curation_snapshot",
            "records": [asdict(r) for r in sorted(self._records.values(), key=lambda r: r.seq)],
        }
        tmp = self.snapshot_path.with_suffix(".json.tmp")
        tmp.write_text(json.dumps(snapshot, indent=2), encoding="utf-8")
        tmp.replace(self.snapshot_path)
