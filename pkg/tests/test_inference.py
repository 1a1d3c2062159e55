import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats as ss

from oxkit.errors import InputError
from oxkit.stats import (
    anova_oneway,
    dunn,
    kruskal_wallis,
    levene,
    shapiro_wilk,
    tukey_hsd,
)


class TestShapiroWilk:
    def test_n3_closed_form(self):
        w, p = shapiro_wilk([1.0, 2.0, 3.0])
        assert w == pytest.approx(1.0, abs=1e-9)
        assert p == pytest.approx(1.0, abs=1e-9)

    def test_affine_invariance(self):
        rng = np.random.default_rng(3)
        x = rng.normal(0, 1, 25).tolist()
        w1, p1 = shapiro_wilk(x)
        w2, p2 = shapiro_wilk([4.2 * v - 17.0 for v in x])
        assert w1 == pytest.approx(w2, abs=1e-12)
        assert p1 == pytest.approx(p2, abs=1e-12)

    def test_bimodal_sample_rejected(self):
        rng = np.random.default_rng(11)
        sample = [0.0 + j for j in rng.uniform(-0.01, 0.01, 10)]
        sample += [10.0 + j for j in rng.uniform(-0.01, 0.01, 10)]
        w, p = shapiro_wilk(sample)
        assert p < 0.05
        # reference implementation of the same standard algorithm
        ref = ss.shapiro(sample)
        assert w == pytest.approx(ref.statistic, abs=1e-8)
        assert p == pytest.approx(ref.pvalue, abs=1e-7)

    @pytest.mark.parametrize("n", [3, 4, 5, 6, 8, 11, 12, 30, 100, 500])
    def test_matches_reference_across_sizes(self, n):
        rng = np.random.default_rng(n)
        x = rng.normal(5, 3, n).tolist()
        w, p = shapiro_wilk(x)
        ref = ss.shapiro(x)
        assert w == pytest.approx(ref.statistic, abs=1e-8)
        assert p == pytest.approx(ref.pvalue, abs=1e-6)

    def test_constant_sample_error(self):
        with pytest.raises(InputError, match="zero variance"):
            shapiro_wilk([2.0, 2.0, 2.0])

    def test_size_bounds(self):
        with pytest.raises(InputError):
            shapiro_wilk([1.0, 2.0])
        with pytest.raises(InputError):
            shapiro_wilk(list(np.random.default_rng(0).normal(0, 1, 5001)))


class TestLevene:
    def test_equal_spread_fixture(self):
        f, p = levene([[1.0, 2.0, 3.0], [4.0, 5.0, 6.0]])
        assert f == pytest.approx(0.0, abs=1e-9)
        assert p == pytest.approx(1.0, abs=1e-9)

    def test_hand_computed_fixture(self):
        # |dev| groups are (0,0,0) and (10,0,10): SSB = SSW = 200/3, df (1,4)
        f, p = levene([[0.0, 0.0, 0.0], [-10.0, 0.0, 10.0]])
        assert f == pytest.approx(4.0, abs=1e-9)
        ref = ss.levene([0.0, 0.0, 0.0], [-10.0, 0.0, 10.0], center="mean")
        assert f == pytest.approx(ref.statistic, abs=1e-9)
        assert p == pytest.approx(ref.pvalue, abs=1e-9)

    def test_shared_value_smoke(self):
        f, p = levene([[1.0, 2.0, 3.0, 2.0], [4.0, 5.0, 6.0, 2.0]])
        assert math.isfinite(f) and 0.0 <= p <= 1.0

    @pytest.mark.parametrize("center", ["mean", "median"])
    def test_matches_scipy(self, center):
        rng = np.random.default_rng(7)
        groups = [rng.normal(0, s, 12).tolist() for s in (1.0, 2.5, 1.2)]
        f, p = levene(groups, centering=center)
        ref = ss.levene(*groups, center=center)
        assert f == pytest.approx(ref.statistic, rel=1e-10)
        assert p == pytest.approx(ref.pvalue, rel=1e-8)

    def test_all_zero_deviations(self):
        assert levene([[5.0, 5.0], [9.0, 9.0]]) == (0.0, 1.0)


class TestAnova:
    def test_hand_computed_fixture(self):
        f, p = anova_oneway([[1.0, 2.0, 3.0], [2.0, 3.0, 4.0]])
        assert f == pytest.approx(1.5, abs=1e-9)
        ref = ss.f_oneway([1.0, 2.0, 3.0], [2.0, 3.0, 4.0])
        assert p == pytest.approx(ref.pvalue, abs=1e-10)

    def test_translation_invariance(self):
        groups = [[1.0, 2.0, 5.0], [2.0, 4.0, 4.0], [1.0, 1.5, 2.5]]
        f1, _ = anova_oneway(groups)
        f2, _ = anova_oneway([[v + 113.7 for v in g] for g in groups])
        assert f1 == pytest.approx(f2, abs=1e-9)

    def test_identical_groups(self):
        f, p = anova_oneway([[1.0, 2.0, 3.0], [1.0, 2.0, 3.0]])
        assert f == pytest.approx(0.0, abs=1e-12)
        assert p == pytest.approx(1.0, abs=1e-12)

    def test_degenerate_within_variance(self):
        with pytest.raises(InputError, match="within-group"):
            anova_oneway([[1.0, 1.0], [2.0, 2.0]])

    def test_matches_scipy(self):
        rng = np.random.default_rng(13)
        groups = [rng.normal(m, 1, 9).tolist() for m in (0.0, 0.4, 1.1, 0.2)]
        f, p = anova_oneway(groups)
        ref = ss.f_oneway(*groups)
        assert f == pytest.approx(ref.statistic, rel=1e-12)
        assert p == pytest.approx(ref.pvalue, rel=1e-9)


class TestKruskalWallis:
    def test_hand_computed_fixture(self):
        h, p = kruskal_wallis([[1.0, 2.0], [3.0, 4.0]])
        assert h == pytest.approx(2.4, abs=1e-9)

    def test_interleaved_fixture(self):
        h, _ = kruskal_wallis([[1.0, 3.0], [2.0, 4.0]])
        assert h == pytest.approx(0.6, abs=1e-9)

    @given(st.integers(0, 2**30))
    @settings(max_examples=50, deadline=None)
    def test_monotone_transform_invariance(self, seed):
        rng = np.random.default_rng(seed)
        groups = [rng.normal(0, 1, 6).tolist(), rng.normal(0.5, 1, 5).tolist()]
        h1, _ = kruskal_wallis(groups)
        h2, _ = kruskal_wallis([[math.exp(v) for v in g] for g in groups])
        assert h1 == pytest.approx(h2, abs=1e-9)

    def test_ties_match_scipy(self):
        groups = [[1.0, 2.0, 2.0, 3.0], [2.0, 2.0, 4.0, 4.0], [1.0, 1.0, 5.0, 2.0]]
        h, p = kruskal_wallis(groups)
        ref = ss.kruskal(*groups)
        assert h == pytest.approx(ref.statistic, abs=1e-10)
        assert p == pytest.approx(ref.pvalue, abs=1e-10)

    def test_all_tied_error(self):
        with pytest.raises(InputError, match="tied"):
            kruskal_wallis([[3.0, 3.0], [3.0, 3.0]])


class TestTukey:
    def test_hand_computed_q(self):
        pairs = tukey_hsd([[1.0, 2.0, 3.0], [2.0, 3.0, 4.0]])
        assert len(pairs) == 1
        assert pairs[0].statistic == pytest.approx(math.sqrt(3.0), abs=1e-9)

    def test_identical_groups_p_one(self):
        pairs = tukey_hsd([[1.0, 2.0, 3.0], [1.0, 2.0, 3.0]])
        assert pairs[0].statistic == pytest.approx(0.0, abs=1e-12)
        assert pairs[0].p == pytest.approx(1.0, abs=1e-12)

    def test_far_outlying_group_significant(self):
        rng = np.random.default_rng(5)
        base = [rng.normal(0, 1, 5).tolist() for _ in range(2)]
        far = (rng.normal(100, 1, 5)).tolist()
        pairs = tukey_hsd(base + [far])
        flagged = [p for p in pairs if 2 in (p.group_a, p.group_b)]
        assert all(p.p < 0.001 for p in flagged)
        assert all(p.significant for p in flagged)

    def test_matches_scipy_tukey(self):
        rng = np.random.default_rng(21)
        groups = [rng.normal(m, 1, 7).tolist() for m in (0.0, 1.0, 0.3)]
        pairs = tukey_hsd(groups)
        ref = ss.tukey_hsd(*groups)
        for pair in pairs:
            assert pair.p == pytest.approx(ref.pvalue[pair.group_a, pair.group_b], abs=1e-6)


class TestDunn:
    def test_hand_computed_z(self):
        pairs = dunn([[1.0, 2.0], [3.0, 4.0]], adjustment="none")
        assert abs(pairs[0].statistic) == pytest.approx(2.0 / math.sqrt(20.0 / 12.0), abs=1e-9)

    def test_identical_rank_means(self):
        pairs = dunn([[1.0, 4.0], [2.0, 3.0]], adjustment="none")
        assert pairs[0].statistic == pytest.approx(0.0, abs=1e-12)
        assert pairs[0].p == pytest.approx(1.0, abs=1e-12)

    def test_bonferroni_multiplies_capped(self):
        groups = [[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]
        raw = dunn(groups, adjustment="none")
        adj = dunn(groups, adjustment="bonferroni")
        for r, a in zip(raw, adj):
            assert a.p == pytest.approx(min(1.0, r.p * 3), abs=1e-12)

    def test_matches_reference_formula_with_ties(self):
        # recompute by the definition on a tied fixture
        groups = [[1.0, 2.0, 2.0], [2.0, 5.0, 6.0]]
        pooled = [1.0, 2.0, 2.0, 2.0, 5.0, 6.0]
        ranks = ss.rankdata(pooled)
        r1, r2 = ranks[:3].mean(), ranks[3:].mean()
        n = 6
        tie_sum = 3**3 - 3
        var = n * (n + 1) / 12 - tie_sum / (12 * (n - 1))
        z_expected = (r1 - r2) / math.sqrt(var * (1 / 3 + 1 / 3))
        pairs = dunn(groups, adjustment="none")
        assert pairs[0].statistic == pytest.approx(z_expected, abs=1e-10)
