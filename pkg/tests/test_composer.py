import pytest
from hypothesis import given, settings, strategies as st

from oxkit.annotations import SurveyImage
from oxkit.composer import (
    SCHEDULES,
    DatasetManifest,
    compose,
    fold_plan_from_dict,
    fold_plan_to_dict,
    manifest_from_dict,
    manifest_to_dict,
    plan_folds,
    split_train_val,
)
from oxkit.errors import ConfigError, InputError


def _pool(kind: str, n: int) -> list[SurveyImage]:
    return [
        SurveyImage(id=f"{kind}{i}", path=f"{kind}{i}.png", width_px=100, height_px=100, kind=kind)
        for i in range(n)
    ]


REAL = _pool("real", 120)
SYNTH = _pool("synthetic", 200)


class TestCompose:
    @pytest.mark.parametrize("name,counts", sorted(SCHEDULES.items()))
    def test_schedule_counts_exact(self, name, counts):
        manifest = compose(name, REAL, SYNTH, seed=1)
        assert (len(manifest.real_images), len(manifest.synthetic_images)) == counts
        assert all(s.kind == "real" for s in manifest.real_images)
        assert all(s.kind == "synthetic" for s in manifest.synthetic_images)

    def test_fs3_is_96_plus_96(self):
        manifest = compose("FS3", REAL, SYNTH, seed=0)
        assert manifest.size == 192

    def test_zs_manifests_have_no_real(self):
        for name in ("ZS1", "ZS2", "ZS3", "ZS4", "ZS5"):
            assert compose(name, REAL, SYNTH, seed=0).real_images == []

    def test_deterministic_under_seed(self):
        a = compose("FS1", REAL, SYNTH, seed=42)
        b = compose("FS1", REAL, SYNTH, seed=42)
        c = compose("FS1", REAL, SYNTH, seed=43)
        assert [s.id for s in a.images] == [s.id for s in b.images]
        assert [s.id for s in a.images] != [s.id for s in c.images]

    def test_insufficient_pool_names_shortfall(self):
        with pytest.raises(InputError, match="synthetic pool"):
            compose("ZS5", REAL, SYNTH[:10], seed=0)

    def test_unknown_schedule(self):
        with pytest.raises(ConfigError):
            compose("XXL", REAL, SYNTH, seed=0)

    def test_custom_counts(self):
        manifest = compose("custom", REAL, SYNTH, seed=0, custom_counts=(3, 2))
        assert (len(manifest.real_images), len(manifest.synthetic_images)) == (3, 2)

    def test_schedule_invariant_enforced_on_construction(self):
        with pytest.raises(InputError, match="counts"):
            DatasetManifest(name="BL", real_images=REAL[:10], synthetic_images=[])


class TestSplit:
    def test_96_gives_77_19(self):
        manifest = compose("BL", REAL, SYNTH, seed=0)
        train, val = split_train_val(manifest, ratio=0.8, seed=0)
        assert (train.size, val.size) == (77, 19)

    def test_stratified_10_images(self):
        manifest = compose("custom", REAL, SYNTH, seed=0, custom_counts=(5, 5))
        train, val = split_train_val(manifest, ratio=0.8, seed=0)
        assert (len(train.real_images), len(train.synthetic_images)) == (4, 4)
        assert (len(val.real_images), len(val.synthetic_images)) == (1, 1)

    def test_ratio_one_rejected(self):
        manifest = compose("custom", REAL, SYNTH, seed=0, custom_counts=(5, 5))
        with pytest.raises(ConfigError):
            split_train_val(manifest, ratio=1.0, seed=0)

    def test_tiny_manifest_rejected(self):
        manifest = compose("custom", REAL, SYNTH, seed=0, custom_counts=(1, 0))
        with pytest.raises(InputError):
            split_train_val(manifest, seed=0)

    @given(n_real=st.integers(0, 40), n_synth=st.integers(0, 40), seed=st.integers(0, 50))
    @settings(max_examples=150)
    def test_split_is_partition(self, n_real, n_synth, seed):
        if n_real + n_synth < 2:
            return
        manifest = compose("custom", REAL, SYNTH, seed=seed, custom_counts=(n_real, n_synth))
        train, val = split_train_val(manifest, ratio=0.8, seed=seed)
        train_ids = {s.id for s in train.images}
        val_ids = {s.id for s in val.images}
        assert train_ids.isdisjoint(val_ids)
        assert train_ids | val_ids == {s.id for s in manifest.images}
        assert len(val_ids) >= 1
        ratio = 0.8
        assert abs(len(train.real_images) - ratio * n_real) <= 1 + 1e-9
        assert abs(len(train.synthetic_images) - ratio * n_synth) <= 1 + 1e-9


class TestFolds:
    def test_96_fold_sizes(self):
        manifest = compose("BL", REAL, SYNTH, seed=0)
        plan = plan_folds(manifest, k=5, seed=0)
        sizes = sorted((len(plan.fold_ids(i)) for i in range(5)), reverse=True)
        assert sizes == [20, 19, 19, 19, 19]

    def test_perfect_division(self):
        manifest = compose("custom", REAL, SYNTH, seed=0, custom_counts=(5, 0))
        plan = plan_folds(manifest, k=5, seed=0)
        assert sorted(len(plan.fold_ids(i)) for i in range(5)) == [1, 1, 1, 1, 1]

    def test_same_seed_identical(self):
        manifest = compose("BL", REAL, SYNTH, seed=0)
        assert plan_folds(manifest, seed=9).assignment == plan_folds(manifest, seed=9).assignment

    def test_folds_partition_images(self):
        manifest = compose("FS2", REAL, SYNTH, seed=3)
        plan = plan_folds(manifest, k=5, seed=3)
        assert set(plan.assignment) == {s.id for s in manifest.images}
        assert set(plan.assignment.values()) == set(range(5))

    def test_too_few_images(self):
        manifest = compose("custom", REAL, SYNTH, seed=0, custom_counts=(3, 0))
        with pytest.raises(InputError):
            plan_folds(manifest, k=5, seed=0)


class TestSerialization:
    def test_manifest_round_trip(self):
        manifest = compose("FS1", REAL, SYNTH, seed=7)
        doc = manifest_to_dict(manifest)
        assert doc["training"] == {"epochs": 300, "learning_rate": 0.001}
        back = manifest_from_dict(doc)
        assert [s.id for s in back.images] == [s.id for s in manifest.images]
        assert back.name == "FS1" and back.seed == 7

    def test_fold_plan_round_trip(self):
        manifest = compose("ZS1", REAL, SYNTH, seed=7)
        plan = plan_folds(manifest, k=5, seed=7)
        assert fold_plan_from_dict(fold_plan_to_dict(plan)).assignment == plan.assignment
