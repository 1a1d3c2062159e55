"""Statistical comparison suite: normality/variance tests, omnibus tests,
post-hoc procedures, and the decision-tree driver."""

from .special import (
    betainc,
    chi2_cdf,
    chi2_sf,
    f_cdf,
    f_sf,
    gammainc_p,
    gammainc_q,
    normal_cdf,
    normal_quantile,
    normal_sf,
)
from .srange import studentized_range_cdf, studentized_range_sf
from .inference import (
    PairResult,
    anova_oneway,
    dunn,
    kruskal_wallis,
    levene,
    shapiro_wilk,
    tukey_hsd,
)
from .compare import GroupedSamples, StatReport, compare_models

__all__ = [
    "GroupedSamples",
    "PairResult",
    "StatReport",
    "anova_oneway",
    "betainc",
    "chi2_cdf",
    "chi2_sf",
    "compare_models",
    "dunn",
    "f_cdf",
    "f_sf",
    "gammainc_p",
    "gammainc_q",
    "kruskal_wallis",
    "levene",
    "normal_cdf",
    "normal_quantile",
    "normal_sf",
    "shapiro_wilk",
    "studentized_range_cdf",
    "studentized_range_sf",
    "tukey_hsd",
]
