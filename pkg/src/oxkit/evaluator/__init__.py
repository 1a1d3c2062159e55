"""Point-detection evaluation: radius matching, metrics, detection stats."""

from .matching import Detection, MatchConfig, MatchResult, match_points
from .metrics import (
    DetectionStats,
    MetricsRow,
    compute_ap,
    compute_prf,
    count_metrics,
    detection_stats,
    evaluate_patches,
)
from .reports import (
    detection_stats_csv,
    metrics_rows_csv,
    parse_detections_jsonl,
    parse_metrics_csv,
)

__all__ = [
    "Detection",
    "DetectionStats",
    "MatchConfig",
    "MatchResult",
    "MetricsRow",
    "compute_ap",
    "compute_prf",
    "count_metrics",
    "detection_stats",
    "detection_stats_csv",
    "evaluate_patches",
    "match_points",
    "metrics_rows_csv",
    "parse_detections_jsonl",
    "parse_metrics_csv",
]
