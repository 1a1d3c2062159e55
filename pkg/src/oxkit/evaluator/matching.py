"""Radius-based matching of scored point detections to ground-truth points.

Greedy mode (the default) processes detections in descending score (ties by
ascending x, then y); each takes the nearest unmatched ground truth within
the radius. Optimal mode solves the maximum-cardinality minimum-total-
distance assignment under the radius constraint and exists as a test
oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..annotations import PointLabel
from ..errors import InputError
from .. import kernels

# dwarfs any achievable sum of pairwise distances, so the assignment solver
# maximizes the number of within-radius pairs before minimizing distance
_FORBIDDEN_COST = 1.0e9


@dataclass(frozen=True)
class Detection:
    """A scored point prediction in patch coordinates."""

    patch_id: str
    x: float
    y: float
    score: float

    def __post_init__(self):
        if not 0.0 <= self.score <= 1.0:
            raise InputError(f"detection on {self.patch_id!r}: score {self.score} outside [0, 1]")
        if self.x < 0 or self.y < 0:
            raise InputError(f"detection on {self.patch_id!r}: negative coordinates")


@dataclass(frozen=True)
class MatchConfig:
    radius_px: float = 30.0
    mode: str = "greedy"  # greedy | optimal

    def __post_init__(self):
        if self.radius_px <= 0:
            raise InputError("match radius must be positive")
        if self.mode not in ("greedy", "optimal"):
            raise InputError(f"unknown match mode {self.mode!r}")


@dataclass
class MatchResult:
    """TP pairs plus unmatched detections (FP) and ground truths (FN)."""

    tp_pairs: list[tuple[Detection, PointLabel]] = field(default_factory=list)
    fp: list[Detection] = field(default_factory=list)
    fn: list[PointLabel] = field(default_factory=list)

    @property
    def n_tp(self) -> int:
        return len(self.tp_pairs)

    @property
    def n_fp(self) -> int:
        return len(self.fp)

    @property
    def n_fn(self) -> int:
        return len(self.fn)


def _sorted_detection_order(det: list[Detection]) -> np.ndarray:
    xs = np.array([d.x for d in det], dtype=np.float64)
    ys = np.array([d.y for d in det], dtype=np.float64)
    scores = np.array([d.score for d in det], dtype=np.float64)
    return np.lexsort((ys, xs, -scores))


def _match_greedy(gt_xy: np.ndarray, det: list[Detection], radius: float) -> dict[int, int]:
    order = _sorted_detection_order(det)
    det_xy = np.array([[det[i].x, det[i].y] for i in order], dtype=np.float64).reshape(-1, 2)
    assigned = kernels.greedy_match(gt_xy, det_xy, radius)
    return {int(order[i]): int(g) for i, g in enumerate(assigned) if g >= 0}


def _match_optimal(gt_xy: np.ndarray, det: list[Detection], radius: float) -> dict[int, int]:
    det_xy = np.array([[d.x, d.y] for d in det], dtype=np.float64).reshape(-1, 2)
    diff = det_xy[:, None, :] - gt_xy[None, :, :]
    dist = np.sqrt((diff * diff).sum(axis=2))
    cost = np.where(dist <= radius, dist, _FORBIDDEN_COST)
    rows, cols = linear_sum_assignment(cost)
    return {int(r): int(c) for r, c in zip(rows, cols) if dist[r, c] <= radius}


def match_points(
    gt: list[PointLabel], det: list[Detection], cfg: MatchConfig | None = None
) -> MatchResult:
    """Match one patch's detections against its ground-truth points."""
    cfg = cfg or MatchConfig()
    if not gt:
        return MatchResult(tp_pairs=[], fp=list(det), fn=[])
    if not det:
        return MatchResult(tp_pairs=[], fp=[], fn=list(gt))

    gt_xy = np.array([[p.x, p.y] for p in gt], dtype=np.float64)
    if cfg.mode == "greedy":
        pairs = _match_greedy(gt_xy, det, cfg.radius_px)
    else:
        pairs = _match_optimal(gt_xy, det, cfg.radius_px)

    matched_gt = set(pairs.values())
    result = MatchResult(
        tp_pairs=[(det[d], gt[g]) for d, g in sorted(pairs.items())],
        fp=[d for i, d in enumerate(det) if i not in pairs],
        fn=[p for j, p in enumerate(gt) if j not in matched_gt],
    )
    if result.n_tp + result.n_fn != len(gt) or result.n_tp + result.n_fp != len(det):
        raise AssertionError("matching conservation violated")  # pragma: no cover
    return result
