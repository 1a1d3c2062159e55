"""Raster handling: resolution normalization and classical augmentation."""

from .raster import load_png, require_rgb8, save_png, read_tensor, write_tensor
from .resize import estimate_scale, resize_bilinear, scale_points
from .augment import AugmentConfig, AugmentResult, augment, rng_for_patch

__all__ = [
    "AugmentConfig",
    "AugmentResult",
    "augment",
    "estimate_scale",
    "load_png",
    "read_tensor",
    "require_rgb8",
    "resize_bilinear",
    "rng_for_patch",
    "save_png",
    "scale_points",
    "write_tensor",
]
