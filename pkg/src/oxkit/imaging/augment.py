"""Seeded classical augmentation pipeline.

Stage order: (1) brightness/contrast, (2) hue/saturation/value shift,
(3) flip, (4) rotation by k*90 degrees, (5) random rescale, (6) box blur,
(7) zero-pad bottom/right to at least the target size, (8) center crop to
exactly the target size, (9) per-channel float normalization. Stages 1-6
each fire independently with the configured probability; 7-9 always apply.
Geometric stages move labels with the raster; photometric stages leave them
alone. Labels landing outside the final crop are dropped.

Each patch gets its own RNG stream derived from (seed, patch id), so
augmenting in parallel or in any order reproduces the same bytes.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .. import kernels
from ..annotations import PointLabel
from ..errors import InputError
from .raster import require_rgb8

IMAGENET_MEAN = (0.485, 0.456, 0.406)
IMAGENET_STD = (0.229, 0.224, 0.225)


@dataclass(frozen=True)
class AugmentConfig:
    """Stage toggles, parameter ranges, and the RNG seed."""

    brightness_limit: tuple[float, float] = (-0.45, 0.55)
    contrast_limit: tuple[float, float] = (-0.60, 1.00)
    hue_shift_limit: tuple[float, float] = (-5.0, 5.0)
    sat_shift_limit: tuple[float, float] = (-50.0, 50.0)
    val_shift_limit: tuple[float, float] = (-20.0, 20.0)
    scale_limit: tuple[float, float] = (-0.15, 0.15)
    blur_limit: tuple[int, int] = (2, 4)
    probability: float = 0.5
    enable_brightness_contrast: bool = True
    enable_hsv: bool = True
    enable_flip: bool = True
    enable_rotate90: bool = True
    enable_scale: bool = True
    enable_blur: bool = True
    out_size: int = 512
    mean: tuple[float, float, float] = IMAGENET_MEAN
    std: tuple[float, float, float] = IMAGENET_STD
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.probability <= 1.0:
            raise InputError("stage probability must lie in [0, 1]")
        for name in ("brightness_limit", "contrast_limit", "hue_shift_limit",
                     "sat_shift_limit", "val_shift_limit", "scale_limit", "blur_limit"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise InputError(f"{name}: empty range ({lo}, {hi})")
        if self.out_size < 1:
            raise InputError("output size must be >= 1")


@dataclass
class AugmentResult:
    """Augmented patch: 8-bit raster after the crop and the normalized tensor."""

    raster_u8: np.ndarray
    tensor: np.ndarray
    labels: list[PointLabel] = field(default_factory=list)


def rng_for_patch(seed: int, patch_id: str | None = None) -> np.random.Generator:
    """Derive a per-patch RNG stream from the global seed and patch id."""
    if patch_id is None:
        return np.random.default_rng(np.random.SeedSequence(seed))
    digest = hashlib.sha256(patch_id.encode("utf-8")).digest()
    key = int.from_bytes(digest[:8], "little")
    return np.random.default_rng(np.random.SeedSequence([seed, key]))


def flip_raster_labels(
    raster: np.ndarray, labels: np.ndarray, horizontal: bool, vertical: bool
) -> tuple[np.ndarray, np.ndarray]:
    """Flip a raster and its (N, 2) label coordinates together."""
    h, w = raster.shape[0], raster.shape[1]
    out = raster
    pts = labels.copy()
    if horizontal:
        out = out[:, ::-1]
        pts[:, 0] = (w - 1) - pts[:, 0]
    if vertical:
        out = out[::-1, :]
        pts[:, 1] = (h - 1) - pts[:, 1]
    return np.ascontiguousarray(out), pts


def rot90_raster_labels(
    raster: np.ndarray, labels: np.ndarray, k: int
) -> tuple[np.ndarray, np.ndarray]:
    """Rotate counter-clockwise by k*90 degrees, carrying the labels along."""
    k = k % 4
    out = raster
    pts = labels.copy()
    for _ in range(k):
        w = out.shape[1]
        out = np.rot90(out)
        pts = np.stack([pts[:, 1], (w - 1) - pts[:, 0]], axis=1) if pts.size else pts.reshape(0, 2)
    return np.ascontiguousarray(out), pts


def pad_to_min(raster: np.ndarray, min_h: int, min_w: int) -> np.ndarray:
    """Zero-pad bottom/right so dims reach at least (min_h, min_w)."""
    h, w = raster.shape[0], raster.shape[1]
    if h >= min_h and w >= min_w:
        return raster
    out = np.zeros((max(h, min_h), max(w, min_w), raster.shape[2]), dtype=raster.dtype)
    out[:h, :w] = raster
    return out


def center_crop(
    raster: np.ndarray, labels: np.ndarray, size: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Crop the central size-by-size window; returns (raster, labels, keep mask).

    Labels are shifted into crop coordinates; the mask flags labels inside
    [0, size) on both axes.
    """
    h, w = raster.shape[0], raster.shape[1]
    y0 = (h - size) // 2
    x0 = (w - size) // 2
    out = np.ascontiguousarray(raster[y0 : y0 + size, x0 : x0 + size])
    pts = labels.copy()
    if pts.size:
        pts[:, 0] -= x0
        pts[:, 1] -= y0
        keep = (pts[:, 0] >= 0) & (pts[:, 0] < size) & (pts[:, 1] >= 0) & (pts[:, 1] < size)
    else:
        keep = np.zeros(0, dtype=bool)
    return out, pts, keep


def normalize(raster: np.ndarray, mean, std) -> np.ndarray:
    """uint8 RGB -> float32 (x/255 - mean) / std, per channel."""
    arr = raster.astype(np.float32) / np.float32(255.0)
    mean_arr = np.asarray(mean, dtype=np.float32).reshape(1, 1, -1)
    std_arr = np.asarray(std, dtype=np.float32).reshape(1, 1, -1)
    return (arr - mean_arr) / std_arr


def augment(
    raster: np.ndarray,
    labels: list[PointLabel],
    cfg: AugmentConfig,
    patch_id: str | None = None,
    path: str | None = None,
) -> AugmentResult:
    """Run the full stage sequence on one patch."""
    img = require_rgb8(raster)
    rng = rng_for_patch(cfg.seed, patch_id)
    pts = np.array([[p.x, p.y] for p in labels], dtype=np.float64).reshape(-1, 2)
    origins = list(labels)

    def fires(enabled: bool) -> bool:
        u = rng.random()
        return enabled and u < cfg.probability

    if fires(cfg.enable_brightness_contrast):
        brightness = rng.uniform(*cfg.brightness_limit)
        contrast = rng.uniform(*cfg.contrast_limit)
        img = kernels.brightness_contrast_u8(img, brightness, contrast, path=path)

    if fires(cfg.enable_hsv):
        dh = rng.uniform(*cfg.hue_shift_limit)
        ds = rng.uniform(*cfg.sat_shift_limit)
        dv = rng.uniform(*cfg.val_shift_limit)
        img = kernels.hsv_shift_u8(img, dh, ds, dv, path=path)

    if fires(cfg.enable_flip):
        direction = int(rng.integers(0, 3))  # 0 horizontal, 1 vertical, 2 both
        img, pts = flip_raster_labels(img, pts, direction != 1, direction != 0)

    if fires(cfg.enable_rotate90):
        k = int(rng.integers(0, 4))
        img, pts = rot90_raster_labels(img, pts, k)

    if fires(cfg.enable_scale):
        factor = 1.0 + rng.uniform(*cfg.scale_limit)
        h_out = int(math.floor(img.shape[0] * factor + 0.5))
        w_out = int(math.floor(img.shape[1] * factor + 0.5))
        if h_out >= 1 and w_out >= 1:
            img = kernels.resize_bilinear_u8(img, h_out, w_out, factor, path=path)
            pts = pts * factor

    if fires(cfg.enable_blur):
        k = int(rng.integers(cfg.blur_limit[0], cfg.blur_limit[1] + 1))
        img = kernels.box_blur_u8(img, k, path=path)

    img = pad_to_min(img, cfg.out_size, cfg.out_size)
    img, pts, keep = center_crop(img, pts, cfg.out_size)

    kept_labels = [
        PointLabel(x=float(pts[i, 0]), y=float(pts[i, 1]), origin_box=origins[i].origin_box)
        for i in range(pts.shape[0])
        if keep[i]
    ]
    tensor = normalize(img, cfg.mean, cfg.std)
    return AugmentResult(raster_u8=img, tensor=tensor, labels=kept_labels)
