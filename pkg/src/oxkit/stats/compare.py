"""Decision-tree driver for multi-model metric comparison.

If every group looks normal (W-test p >= alpha) and variances are
homogeneous (p >= alpha), the omnibus is the one-way F test with pairwise
HSD afterwards; otherwise the rank-based omnibus with pairwise z tests.
Post-hoc runs only when the omnibus is significant. Every intermediate
p-value lands in the report's trace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import InputError
from .inference import (
    PairResult,
    anova_oneway,
    dunn,
    kruskal_wallis,
    levene,
    shapiro_wilk,
    tukey_hsd,
)


@dataclass
class GroupedSamples:
    """Per-model observation lists for one metric (e.g. F1 across folds)."""

    groups: list[tuple[str, list[float]]]
    metric_name: str = ""

    def __post_init__(self):
        if len(self.groups) < 2:
            raise InputError("need at least 2 groups to compare")
        for label, values in self.groups:
            if len(values) < 3:
                raise InputError(f"group {label!r} has {len(values)} observation(s), need >= 3")

    @property
    def labels(self) -> list[str]:
        return [label for label, _ in self.groups]

    @property
    def values(self) -> list[list[float]]:
        return [list(v) for _, v in self.groups]


@dataclass
class NormalityResult:
    group: str
    w: float
    p: float


@dataclass
class StatReport:
    """Full decision trace of one model comparison."""

    metric_name: str
    alpha: float
    group_labels: list[str]
    normality: list[NormalityResult]
    normality_ok: bool
    levene_center: str
    levene_stat: float
    levene_p: float
    levene_ok: bool
    omnibus: str
    omnibus_stat: float
    omnibus_p: float
    posthoc: str | None = None
    pairs: list[PairResult] | None = None
    trace: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "kind": "stat_report",
            "metric": self.metric_name,
            "alpha": self.alpha,
            "groups": self.group_labels,
            "normality": [
                {"group": r.group, "w": _none_if_nan(r.w), "p": r.p} for r in self.normality
            ],
            "normality_ok": self.normality_ok,
            "levene": {
                "center": self.levene_center,
                "statistic": _none_if_nan(self.levene_stat),
                "p": self.levene_p,
                "ok": self.levene_ok,
            },
            "omnibus": {
                "test": self.omnibus,
                "statistic": self.omnibus_stat,
                "p": self.omnibus_p,
                "significant": self.omnibus_p < self.alpha,
            },
            "posthoc": None
            if self.posthoc is None
            else {
                "test": self.posthoc,
                "pairs": [
                    {
                        "a": self.group_labels[p.group_a],
                        "b": self.group_labels[p.group_b],
                        "statistic": p.statistic,
                        "p": p.p,
                        "significant": p.significant,
                    }
                    for p in self.pairs or []
                ],
            },
            "trace": list(self.trace),
        }


def _none_if_nan(value: float):
    return None if isinstance(value, float) and math.isnan(value) else value


def compare_models(
    samples: GroupedSamples,
    alpha: float = 0.05,
    levene_center: str = "mean",
    dunn_adjustment: str = "bonferroni",
) -> StatReport:
    """Run the full comparison procedure on grouped metric samples."""
    if not 0.0 < alpha < 1.0:
        raise InputError("alpha must lie strictly inside (0, 1)")
    values = samples.values
    trace: list[str] = []

    normality: list[NormalityResult] = []
    normality_ok = True
    for label, group in samples.groups:
        try:
            w, p = shapiro_wilk(group)
        except InputError as exc:
            w, p = math.nan, 0.0
            trace.append(f"normality[{label}]: {exc}; treated as non-normal")
        normality.append(NormalityResult(label, w, p))
        if p < alpha:
            normality_ok = False
        trace.append(f"normality[{label}]: W={_fmt(w)} p={p:.6g}")

    lev_stat, lev_p = levene(values, centering=levene_center)
    lev_ok = lev_p >= alpha
    trace.append(f"variance homogeneity ({levene_center}): F={_fmt(lev_stat)} p={lev_p:.6g}")

    if normality_ok and lev_ok:
        omnibus = "anova"
        stat, p = anova_oneway(values)
        trace.append(f"omnibus anova: F={_fmt(stat)} p={p:.6g}")
    else:
        omnibus = "kruskal_wallis"
        stat, p = kruskal_wallis(values)
        trace.append(f"omnibus kruskal_wallis: H={_fmt(stat)} p={p:.6g}")

    posthoc = None
    pairs = None
    if p < alpha:
        if omnibus == "anova":
            posthoc = "tukey_hsd"
            pairs = tukey_hsd(values, alpha=alpha)
        else:
            posthoc = "dunn"
            pairs = dunn(values, adjustment=dunn_adjustment, alpha=alpha)
        n_sig = sum(1 for q in pairs if q.significant)
        trace.append(f"posthoc {posthoc}: {n_sig}/{len(pairs)} significant pair(s)")
    else:
        trace.append("omnibus not significant: no posthoc")

    return StatReport(
        metric_name=samples.metric_name,
        alpha=alpha,
        group_labels=samples.labels,
        normality=normality,
        normality_ok=normality_ok,
        levene_center=levene_center,
        levene_stat=lev_stat,
        levene_p=lev_p,
        levene_ok=lev_ok,
        omnibus=omnibus,
        omnibus_stat=stat,
        omnibus_p=p,
        posthoc=posthoc,
        pairs=pairs,
        trace=trace,
    )


def _fmt(x: float) -> str:
    return "nan" if isinstance(x, float) and math.isnan(x) else f"{x:.6g}"
