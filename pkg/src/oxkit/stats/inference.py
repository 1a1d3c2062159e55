"""Normality, variance, omnibus, and post-hoc tests.

Implementations follow the standard constructions: the W test uses the
normal-order-statistics coefficient approximation with the published normal
approximation for its p-value; the variance-homogeneity test is a one-way F
on absolute deviations from the group center; the rank test uses mid-ranks
with the usual tie correction. Pairwise procedures report two-sided
p-values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import InputError
from .special import chi2_sf, f_sf, normal_quantile, normal_sf
from .srange import studentized_range_sf

_AN_POLY = (-2.706056, 4.434685, -2.071190, -0.147981, 0.221157)  # u^5 .. u^1
_AN1_POLY = (-3.582633, 5.682633, -1.752461, -0.293762, 0.042981)


def _poly(coeffs: tuple[float, ...], u: float, tail: float) -> float:
    value = 0.0
    for c in coeffs:
        value = value * u + c
    return value * u + tail


def shapiro_wilk(sample: list[float]) -> tuple[float, float]:
    """W statistic and p-value for normality of one sample (3 <= n <= 5000)."""
    x = np.sort(np.asarray(sample, dtype=np.float64))
    n = x.size
    if n < 3 or n > 5000:
        raise InputError(f"normality test needs 3 <= n <= 5000, got {n}")
    if x[-1] - x[0] == 0.0:
        raise InputError("normality test: sample has zero variance")

    m = np.array(
        [normal_quantile((i - 0.375) / (n + 0.25)) for i in range(1, n + 1)],
        dtype=np.float64,
    )
    ssumm2 = float(m @ m)
    rsn = 1.0 / math.sqrt(n)

    a = np.empty(n, dtype=np.float64)
    if n == 3:
        a[0] = -math.sqrt(0.5)
        a[1] = 0.0
        a[2] = math.sqrt(0.5)
    else:
        an = _poly(_AN_POLY, rsn, m[-1] / math.sqrt(ssumm2))
        if n > 5:
            an1 = _poly(_AN1_POLY, rsn, m[-2] / math.sqrt(ssumm2))
            fac = math.sqrt(
                (ssumm2 - 2.0 * m[-1] ** 2 - 2.0 * m[-2] ** 2)
                / (1.0 - 2.0 * an**2 - 2.0 * an1**2)
            )
            a[2 : n - 2] = m[2 : n - 2] / fac
            a[-2] = an1
            a[1] = -an1
        else:
            fac = math.sqrt((ssumm2 - 2.0 * m[-1] ** 2) / (1.0 - 2.0 * an**2))
            a[1 : n - 1] = m[1 : n - 1] / fac
        a[-1] = an
        a[0] = -an

    numerator = float(a @ x) ** 2
    denominator = float(((x - x.mean()) ** 2).sum())
    w = min(numerator / denominator, 1.0)

    if n == 3:
        p = (6.0 / math.pi) * (math.asin(math.sqrt(w)) - math.asin(math.sqrt(0.75)))
        return w, min(max(p, 0.0), 1.0)
    w1 = 1.0 - w
    if w1 <= 0.0:
        return w, 1.0
    if n <= 11:
        gamma = -2.273 + 0.459 * n
        if gamma - math.log(w1) <= 0.0:
            return w, 0.0
        stat = -math.log(gamma - math.log(w1))
        mu = 0.5440 - 0.39978 * n + 0.025054 * n**2 - 0.0006714 * n**3
        sigma = math.exp(1.3822 - 0.77857 * n + 0.062767 * n**2 - 0.0020322 * n**3)
    else:
        u = math.log(n)
        stat = math.log(w1)
        mu = -1.5861 - 0.31082 * u - 0.083751 * u**2 + 0.0038915 * u**3
        sigma = math.exp(-0.4803 - 0.082676 * u + 0.0030302 * u**2)
    return w, normal_sf((stat - mu) / sigma)


def _as_groups(groups: list[list[float]], min_size: int) -> list[np.ndarray]:
    if len(groups) < 2:
        raise InputError("need at least 2 groups")
    arrays = [np.asarray(g, dtype=np.float64) for g in groups]
    for i, g in enumerate(arrays):
        if g.size < min_size:
            raise InputError(f"group {i} has {g.size} observation(s), need >= {min_size}")
    return arrays


def _anova_f(arrays: list[np.ndarray]) -> tuple[float, float, int, int]:
    k = len(arrays)
    n_total = sum(g.size for g in arrays)
    grand = sum(float(g.sum()) for g in arrays) / n_total
    ssb = sum(g.size * (float(g.mean()) - grand) ** 2 for g in arrays)
    ssw = sum(float(((g - g.mean()) ** 2).sum()) for g in arrays)
    return ssb, ssw, k - 1, n_total - k


def anova_oneway(groups: list[list[float]]) -> tuple[float, float]:
    """One-way F test of equal group means."""
    arrays = _as_groups(groups, 2)
    ssb, ssw, df1, df2 = _anova_f(arrays)
    if ssw == 0.0:
        raise InputError("degenerate within-group variance (all groups constant)")
    f = (ssb / df1) / (ssw / df2)
    return f, f_sf(f, df1, df2)


def levene(groups: list[list[float]], centering: str = "mean") -> tuple[float, float]:
    """Variance-homogeneity F on absolute deviations from the group center."""
    if centering not in ("mean", "median"):
        raise InputError(f"unknown centering {centering!r}")
    arrays = _as_groups(groups, 2)
    devs = []
    for g in arrays:
        center = float(np.mean(g)) if centering == "mean" else float(np.median(g))
        devs.append(np.abs(g - center))
    ssb, ssw, df1, df2 = _anova_f(devs)
    if ssw == 0.0:
        if ssb == 0.0:
            return 0.0, 1.0
        return math.inf, 0.0
    f = (ssb / df1) / (ssw / df2)
    return f, f_sf(f, df1, df2)


def _midranks(values: np.ndarray) -> tuple[np.ndarray, float]:
    """Mid-ranks of pooled values, plus the tie sum over runs of equal values."""
    n = values.size
    order = np.argsort(values, kind="stable")
    ranks = np.empty(n, dtype=np.float64)
    sv = values[order]
    tie_sum = 0.0
    i = 0
    while i < n:
        j = i
        while j + 1 < n and sv[j + 1] == sv[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2.0 + 1.0
        run = j - i + 1
        if run > 1:
            tie_sum += run**3 - run
        i = j + 1
    return ranks, tie_sum


def kruskal_wallis(groups: list[list[float]]) -> tuple[float, float]:
    """Rank-based omnibus H test with mid-rank tie correction."""
    arrays = _as_groups(groups, 1)
    pooled = np.concatenate(arrays)
    n = pooled.size
    if n < 3:
        raise InputError("rank test needs at least 3 pooled observations")
    ranks, tie_sum = _midranks(pooled)
    correction = 1.0 - tie_sum / (n**3 - n)
    if correction == 0.0:
        raise InputError("all observations are tied")
    h = 0.0
    offset = 0
    for g in arrays:
        r_mean = float(ranks[offset : offset + g.size].mean())
        h += g.size * (r_mean - (n + 1) / 2.0) ** 2
        offset += g.size
    h *= 12.0 / (n * (n + 1))
    h /= correction
    return h, chi2_sf(h, len(arrays) - 1)


@dataclass(frozen=True)
class PairResult:
    """One pairwise post-hoc comparison."""

    group_a: int
    group_b: int
    statistic: float
    p: float
    significant: bool


def tukey_hsd(groups: list[list[float]], alpha: float = 0.05) -> list[PairResult]:
    """All-pairs honestly-significant-difference comparisons after an F test."""
    arrays = _as_groups(groups, 2)
    _, ssw, _, df2 = _anova_f(arrays)
    if ssw == 0.0:
        raise InputError("degenerate within-group variance (all groups constant)")
    msw = ssw / df2
    k = len(arrays)
    pairs = []
    for i in range(k):
        for j in range(i + 1, k):
            ni, nj = arrays[i].size, arrays[j].size
            se = math.sqrt(msw / 2.0 * (1.0 / ni + 1.0 / nj))
            q = abs(float(arrays[i].mean()) - float(arrays[j].mean())) / se
            p = studentized_range_sf(q, k, df2)
            pairs.append(PairResult(i, j, q, p, p < alpha))
    return pairs


def dunn(
    groups: list[list[float]], adjustment: str = "bonferroni", alpha: float = 0.05
) -> list[PairResult]:
    """Rank-based pairwise z comparisons after the omnibus rank test."""
    if adjustment not in ("none", "bonferroni"):
        raise InputError(f"unknown adjustment {adjustment!r}")
    arrays = _as_groups(groups, 1)
    pooled = np.concatenate(arrays)
    n = pooled.size
    ranks, tie_sum = _midranks(pooled)
    var_base = n * (n + 1) / 12.0 - tie_sum / (12.0 * (n - 1))
    if var_base <= 0.0:
        raise InputError("all observations are tied")
    rank_means = []
    offset = 0
    for g in arrays:
        rank_means.append(float(ranks[offset : offset + g.size].mean()))
        offset += g.size
    k = len(arrays)
    n_pairs = k * (k - 1) // 2
    pairs = []
    for i in range(k):
        for j in range(i + 1, k):
            se = math.sqrt(var_base * (1.0 / arrays[i].size + 1.0 / arrays[j].size))
            z = (rank_means[i] - rank_means[j]) / se
            p = 2.0 * normal_sf(abs(z))
            if adjustment == "bonferroni":
                p = min(1.0, p * n_pairs)
            pairs.append(PairResult(i, j, z, p, p < alpha))
    return pairs
