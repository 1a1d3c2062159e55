"""Evaluator wire formats: detections JSONL, metrics CSV, detection-stats CSV."""

from __future__ import annotations

import csv
import io
import json

from ..errors import InputError
from .matching import Detection
from .metrics import DetectionStats, MetricsRow

METRICS_HEADER = ["model", "fold", "ap", "mae", "mse", "rmse", "precision", "recall", "f1"]
STATS_HEADER = [
    "model", "scope", "patches",
    "tp_total", "fp_total", "fn_total",
    "tp_avg", "fp_avg", "fn_avg",
]


def parse_detections_jsonl(text: str, patch_w: int = 512, patch_h: int = 512) -> dict[str, list[Detection]]:
    """Parse line-delimited ``{patch_id, x, y, score}`` records.

    Coordinates must lie inside [0, patch) on both axes.
    """
    grouped: dict[str, list[Detection]] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise InputError(f"detections line {line_no}: invalid JSON: {exc}") from exc
        try:
            det = Detection(
                patch_id=str(obj["patch_id"]),
                x=float(obj["x"]),
                y=float(obj["y"]),
                score=float(obj["score"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"detections line {line_no}: {exc}") from exc
        if det.x >= patch_w or det.y >= patch_h:
            raise InputError(
                f"detections line {line_no}: ({det.x}, {det.y}) outside the "
                f"{patch_w}x{patch_h} patch"
            )
        grouped.setdefault(det.patch_id, []).append(det)
    return grouped


def detections_to_jsonl(det_by_patch: dict[str, list[Detection]]) -> str:
    lines = []
    for pid in sorted(det_by_patch):
        for d in det_by_patch[pid]:
            lines.append(json.dumps({"patch_id": pid, "x": d.x, "y": d.y, "score": d.score}))
    return "\n".join(lines) + ("\n" if lines else "")


def metrics_rows_csv(rows: list[MetricsRow], precision: int = 6) -> str:
    """Render metrics rows in the report column order."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(METRICS_HEADER)
    for r in sorted(rows, key=lambda r: (r.model, r.fold)):
        writer.writerow(
            [r.model, r.fold]
            + [format(v, f".{precision}f") for v in (r.ap, r.mae, r.mse, r.rmse, r.precision, r.recall, r.f1)]
        )
    return out.getvalue()


def parse_metrics_csv(text: str) -> list[MetricsRow]:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise InputError("metrics csv: empty file") from None
    if [h.strip() for h in header] != METRICS_HEADER:
        raise InputError(f"metrics csv: bad header {header!r}")
    rows = []
    for line_no, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != len(METRICS_HEADER):
            raise InputError(f"metrics csv line {line_no}: expected {len(METRICS_HEADER)} fields")
        try:
            rows.append(
                MetricsRow(
                    model=row[0].strip(),
                    fold=int(row[1]),
                    ap=float(row[2]),
                    mae=float(row[3]),
                    mse=float(row[4]),
                    rmse=float(row[5]),
                    precision=float(row[6]),
                    recall=float(row[7]),
                    f1=float(row[8]),
                )
            )
        except ValueError as exc:
            raise InputError(f"metrics csv line {line_no}: {exc}") from exc
    return rows


def detection_stats_csv(entries: list[tuple[str, str, DetectionStats]]) -> str:
    """Render (model, scope, stats) entries; averages at 2-decimal precision."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(STATS_HEADER)
    for model, scope, s in entries:
        writer.writerow(
            [model, scope, s.n_patches, s.tp_total, s.fp_total, s.fn_total]
            + [format(v, ".2f") for v in (s.tp_avg, s.fp_avg, s.fn_avg)]
        )
    return out.getvalue()
