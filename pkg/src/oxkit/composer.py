"""Dataset composition: named schedules, 80/20 split, 5-fold plans.

The eleven named schedules fix exact real/synthetic image counts
(BL 96/0; ZS1-ZS5 0/30..160; FS1-FS5 96/30..160). Everything operates at
the image level so no patch of one image can leak across a split or fold
boundary. All randomness flows from an explicit seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .annotations import KIND_REAL, KIND_SYNTHETIC, SurveyImage
from .errors import ConfigError, InputError

SCHEDULES: dict[str, tuple[int, int]] = {
    "BL": (96, 0),
    "ZS1": (0, 30),
    "ZS2": (0, 60),
    "ZS3": (0, 96),
    "ZS4": (0, 130),
    "ZS5": (0, 160),
    "FS1": (96, 30),
    "FS2": (96, 60),
    "FS3": (96, 96),
    "FS4": (96, 130),
    "FS5": (96, 160),
}

# distinct RNG streams per operation so call order never matters
_COMPOSE_TAG = 101
_SPLIT_TAG = 102
_FOLD_TAG = 103


@dataclass
class DatasetManifest:
    """A named composition of real and synthetic images."""

    name: str
    real_images: list[SurveyImage] = field(default_factory=list)
    synthetic_images: list[SurveyImage] = field(default_factory=list)
    seed: int = 0
    role: str = "full"  # full | train | val

    def __post_init__(self):
        if self.name != "custom" and self.name not in SCHEDULES:
            raise ConfigError(f"unknown schedule {self.name!r}")
        if self.name in SCHEDULES and self.role == "full":
            want = SCHEDULES[self.name]
            got = (len(self.real_images), len(self.synthetic_images))
            if got != want:
                raise InputError(f"schedule {self.name}: counts {got} do not match {want}")

    @property
    def images(self) -> list[SurveyImage]:
        return list(self.real_images) + list(self.synthetic_images)

    @property
    def size(self) -> int:
        return len(self.real_images) + len(self.synthetic_images)


@dataclass
class FoldPlan:
    """Image-level k-fold partition (fold sizes differ by at most one)."""

    k: int
    assignment: dict[str, int]
    seed: int = 0

    def fold_ids(self, fold: int) -> list[str]:
        return [img_id for img_id, f in self.assignment.items() if f == fold]


def _rng(seed: int, tag: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([seed, tag]))


def _take(pool: list[SurveyImage], n: int, rng: np.random.Generator, kind: str) -> list[SurveyImage]:
    usable = [img for img in pool if img.kind == kind]
    if len(usable) < n:
        raise InputError(
            f"{kind} pool has {len(usable)} usable image(s), schedule needs {n}"
        )
    order = rng.permutation(len(usable))
    return [usable[i] for i in order[:n]]


def compose(
    schedule: str,
    real_pool: list[SurveyImage],
    synth_pool: list[SurveyImage],
    seed: int = 0,
    custom_counts: tuple[int, int] | None = None,
) -> DatasetManifest:
    """Draw a manifest for a named schedule from shuffled pools."""
    if schedule == "custom":
        if custom_counts is None:
            raise ConfigError("custom schedule requires explicit (real, synthetic) counts")
        n_real, n_synth = custom_counts
    else:
        if schedule not in SCHEDULES:
            raise ConfigError(f"unknown schedule {schedule!r}; expected one of {sorted(SCHEDULES)}")
        n_real, n_synth = SCHEDULES[schedule]
    rng = _rng(seed, _COMPOSE_TAG)
    real = _take(real_pool, n_real, rng, KIND_REAL)
    synth = _take(synth_pool, n_synth, rng, KIND_SYNTHETIC)
    ids = [img.id for img in real + synth]
    if len(set(ids)) != len(ids):
        raise InputError("duplicate image ids across the composed manifest")
    return DatasetManifest(name=schedule, real_images=real, synthetic_images=synth, seed=seed)


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def split_train_val(
    manifest: DatasetManifest, ratio: float = 0.8, seed: int = 0
) -> tuple[DatasetManifest, DatasetManifest]:
    """Image-level stratified split; train gets round(ratio * n) images.

    Stratification keeps the real:synthetic proportion of each side within
    one image of the manifest's. Both sides must end up nonempty.
    """
    n = manifest.size
    if n < 2:
        raise InputError("cannot split a manifest with fewer than 2 images")
    if not (0.0 < ratio < 1.0):
        raise ConfigError("split ratio must lie strictly between 0 and 1")
    n_train = _round_half_up(ratio * n)
    n_train = min(max(n_train, 1), n - 1)

    rng = _rng(seed, _SPLIT_TAG)
    real = [manifest.real_images[i] for i in rng.permutation(len(manifest.real_images))]
    synth = [manifest.synthetic_images[i] for i in rng.permutation(len(manifest.synthetic_images))]

    t_real = _round_half_up(ratio * len(real))
    t_real = min(max(t_real, n_train - len(synth)), min(len(real), n_train))
    t_synth = n_train - t_real

    train = DatasetManifest(
        name=manifest.name,
        real_images=real[:t_real],
        synthetic_images=synth[:t_synth],
        seed=seed,
        role="train",
    )
    val = DatasetManifest(
        name=manifest.name,
        real_images=real[t_real:],
        synthetic_images=synth[t_synth:],
        seed=seed,
        role="val",
    )
    assert train.size + val.size == n
    assert abs(t_real - ratio * len(real)) <= 1.0 + 1e-9
    return train, val


def plan_folds(manifest: DatasetManifest, k: int = 5, seed: int = 0) -> FoldPlan:
    """Seeded shuffle then round-robin fold assignment over all images."""
    if k < 2:
        raise ConfigError("fold count must be >= 2")
    ids = [img.id for img in manifest.images]
    if len(ids) < k:
        raise InputError(f"cannot plan {k} folds over {len(ids)} image(s)")
    rng = _rng(seed, _FOLD_TAG)
    order = rng.permutation(len(ids))
    assignment = {ids[idx]: i % k for i, idx in enumerate(order)}
    return FoldPlan(k=k, assignment=assignment, seed=seed)


def manifest_to_dict(manifest: DatasetManifest, training: dict | None = None) -> dict:
    """JSON-ready manifest record (with pass-through trainer hyperparameters)."""

    def img(s: SurveyImage) -> dict:
        return {
            "id": s.id,
            "path": s.path,
            "width_px": s.width_px,
            "height_px": s.height_px,
            "kind": s.kind,
            "source_tag": s.source_tag,
            "gsd_cm_per_px": s.gsd_cm_per_px,
        }

    return {
        "schema_version": 1,
        "kind": "dataset_manifest",
        "name": manifest.name,
        "role": manifest.role,
        "seed": manifest.seed,
        "training": training or {"epochs": 300, "learning_rate": 0.001},
        "real_images": [img(s) for s in manifest.real_images],
        "synthetic_images": [img(s) for s in manifest.synthetic_images],
    }


def manifest_from_dict(doc: dict) -> DatasetManifest:
    if doc.get("kind") != "dataset_manifest":
        raise InputError("not a dataset manifest document")

    def img(d: dict) -> SurveyImage:
        return SurveyImage(
            id=d["id"],
            path=d["path"],
            width_px=int(d["width_px"]),
            height_px=int(d["height_px"]),
            kind=d["kind"],
            source_tag=d.get("source_tag", ""),
            gsd_cm_per_px=d.get("gsd_cm_per_px"),
        )

    return DatasetManifest(
        name=doc["name"],
        real_images=[img(d) for d in doc.get("real_images", [])],
        synthetic_images=[img(d) for d in doc.get("synthetic_images", [])],
        seed=int(doc.get("seed", 0)),
        role=doc.get("role", "full"),
    )


def fold_plan_to_dict(plan: FoldPlan) -> dict:
    return {
        "schema_version": 1,
        "kind": "fold_plan",
        "k": plan.k,
        "seed": plan.seed,
        "assignment": dict(plan.assignment),
    }


def fold_plan_from_dict(doc: dict) -> FoldPlan:
    if doc.get("kind") != "fold_plan":
        raise InputError("not a fold plan document")
    return FoldPlan(
        k=int(doc["k"]),
        assignment={str(k): int(v) for k, v in doc["assignment"].items()},
        seed=int(doc.get("seed", 0)),
    )
