"""Detection metrics: precision/recall/F1, average precision, count errors,
and the per-patch detection-statistics aggregation."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..annotations import PointLabel
from ..errors import InputError
from .matching import Detection, MatchConfig, match_points


def compute_prf(total_tp: int, total_fp: int, total_fn: int) -> tuple[float, float, float]:
    """Precision, recall, F1 from pooled counts.

    Zero-denominator convention: a precision or recall with an empty
    denominator is 0, and F1 is 0 when P + R is 0.
    """
    if min(total_tp, total_fp, total_fn) < 0:
        raise InputError("counts must be non-negative")
    precision = total_tp / (total_tp + total_fp) if total_tp + total_fp else 0.0
    recall = total_tp / (total_tp + total_fn) if total_tp + total_fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1


def compute_ap(
    patches: list[tuple[list[PointLabel], list[Detection]]],
    cfg: MatchConfig | None = None,
) -> float:
    """Average precision over a descending sweep of pooled score thresholds.

    At each distinct score, matching runs per patch on the detections at or
    above it; AP is the area under the precision envelope of the resulting
    PR sequence (all-point interpolation).
    """
    cfg = cfg or MatchConfig()
    total_gt = sum(len(gt) for gt, _ in patches)
    if total_gt == 0:
        raise InputError("AP undefined: no ground truth in any patch")
    thresholds = sorted({d.score for _, dets in patches for d in dets}, reverse=True)
    if not thresholds:
        return 0.0

    recalls: list[float] = []
    precisions: list[float] = []
    for t in thresholds:
        tp = fp = 0
        for gt, dets in patches:
            sub = [d for d in dets if d.score >= t]
            if not sub and not gt:
                continue
            res = match_points(gt, sub, cfg)
            tp += res.n_tp
            fp += res.n_fp
        recalls.append(tp / total_gt)
        precisions.append(tp / (tp + fp) if tp + fp else 0.0)

    # integrate under the running-max precision envelope, left to right in
    # recall (thresholds descend, so recall is already non-decreasing)
    envelope = list(precisions)
    for i in range(len(envelope) - 2, -1, -1):
        envelope[i] = max(envelope[i], envelope[i + 1])
    ap = 0.0
    prev_r = 0.0
    for r, p in zip(recalls, envelope):
        ap += (r - prev_r) * p
        prev_r = r
    return ap


def count_metrics(per_patch: list[tuple[int, int]]) -> tuple[float, float, float]:
    """MAE, MSE, RMSE of predicted vs true per-patch animal counts."""
    if not per_patch:
        raise InputError("count metrics need at least one patch")
    errors = [pred - true for true, pred in per_patch]
    mae = sum(abs(e) for e in errors) / len(errors)
    mse = sum(e * e for e in errors) / len(errors)
    return mae, mse, math.sqrt(mse)


@dataclass(frozen=True)
class DetectionStats:
    """Pooled TP/FP/FN totals and their per-patch averages."""

    n_patches: int
    tp_total: int
    fp_total: int
    fn_total: int
    tp_avg: float
    fp_avg: float
    fn_avg: float


def detection_stats(per_patch: list[tuple[int, int, int]], n_patches: int) -> DetectionStats:
    """Sum per-patch (tp, fp, fn) triples and average over ``n_patches``."""
    if n_patches < 1:
        raise InputError("number of patches must be >= 1")
    tp = sum(t for t, _, _ in per_patch)
    fp = sum(f for _, f, _ in per_patch)
    fn = sum(n for _, _, n in per_patch)
    return DetectionStats(
        n_patches=n_patches,
        tp_total=tp,
        fp_total=fp,
        fn_total=fn,
        tp_avg=tp / n_patches,
        fp_avg=fp / n_patches,
        fn_avg=fn / n_patches,
    )


@dataclass(frozen=True)
class MetricsRow:
    """One model/fold row of the metrics report."""

    model: str
    fold: int
    ap: float
    mae: float
    mse: float
    rmse: float
    precision: float
    recall: float
    f1: float

    # published reports round to 2 decimals, so consistency checks carry
    # that much slack; freshly computed rows are exact
    _ROUNDING_SLACK = 0.011

    def __post_init__(self):
        for name in ("ap", "precision", "recall", "f1"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise InputError(f"{name} = {v} outside [0, 1]")
        if abs(self.rmse - math.sqrt(self.mse)) > self._ROUNDING_SLACK:
            raise InputError("rmse must equal sqrt(mse)")
        if self.mae > self.rmse + self._ROUNDING_SLACK:
            raise InputError("mae cannot exceed rmse")


def evaluate_patches(
    gt_by_patch: dict[str, list[PointLabel]],
    det_by_patch: dict[str, list[Detection]],
    cfg: MatchConfig | None = None,
    scope: str = "nonempty",
    model: str = "model",
    fold: int = 0,
) -> tuple[MetricsRow, DetectionStats, dict[str, tuple[int, int, int]]]:
    """Evaluate a detector's output against ground truth, patch by patch.

    ``scope`` selects which patches count: ``nonempty`` restricts to patches
    with at least one ground-truth animal (detections on other patches are
    ignored); ``all`` scores every patch seen in either input, so false
    positives on empty patches count too.
    """
    cfg = cfg or MatchConfig()
    if scope not in ("nonempty", "all"):
        raise InputError(f"unknown scope {scope!r}")
    if scope == "nonempty":
        patch_ids = sorted(pid for pid, pts in gt_by_patch.items() if pts)
    else:
        patch_ids = sorted(set(gt_by_patch) | set(det_by_patch))
    if not patch_ids:
        raise InputError("no patches to evaluate in the requested scope")

    per_patch: dict[str, tuple[int, int, int]] = {}
    count_pairs: list[tuple[int, int]] = []
    pooled: list[tuple[list[PointLabel], list[Detection]]] = []
    for pid in patch_ids:
        gt = gt_by_patch.get(pid, [])
        dets = det_by_patch.get(pid, [])
        res = match_points(gt, dets, cfg)
        per_patch[pid] = (res.n_tp, res.n_fp, res.n_fn)
        count_pairs.append((len(gt), len(dets)))
        pooled.append((gt, dets))

    stats = detection_stats(list(per_patch.values()), len(patch_ids))
    precision, recall, f1 = compute_prf(stats.tp_total, stats.fp_total, stats.fn_total)
    mae, mse, rmse = count_metrics(count_pairs)
    ap = compute_ap(pooled, cfg)
    row = MetricsRow(
        model=model, fold=fold, ap=ap, mae=mae, mse=mse, rmse=rmse,
        precision=precision, recall=recall, f1=f1,
    )
    return row, stats, per_patch
