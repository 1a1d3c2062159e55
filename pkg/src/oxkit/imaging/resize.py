"""Resolution normalization: scale estimation and bilinear resizing.

Images are rescaled so the median animal long side hits a target length
(about 100 px for training imagery, 70 px for test imagery). Labels follow
the raster through ``p' = p * scale``.
"""

from __future__ import annotations

import math

import numpy as np

from .. import kernels
from ..annotations import BoxAnnotation, PointLabel
from ..errors import InputError
from .raster import require_rgb8

TRAIN_TARGET_LENGTH_PX = 100.0
TEST_TARGET_LENGTH_PX = 70.0


def estimate_scale(annotations: list[BoxAnnotation], target_length_px: float) -> float:
    """Scale factor bringing the median box long side to the target length.

    The median of an even count is the mean of the two central values.
    """
    if target_length_px <= 0:
        raise InputError("target length must be positive")
    if not annotations:
        raise InputError("no animals to calibrate scale from")
    long_sides = sorted(b.long_side for b in annotations)
    n = len(long_sides)
    if n % 2 == 1:
        median = long_sides[n // 2]
    else:
        median = (long_sides[n // 2 - 1] + long_sides[n // 2]) / 2.0
    return target_length_px / median


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def resize_bilinear(
    raster: np.ndarray, scale: float, path: str | None = None
) -> np.ndarray:
    """Resize a uint8 raster by ``scale`` with center-aligned bilinear sampling.

    Output dimensions are round(dim * scale) and must stay >= 1. A scale of
    exactly 1.0 returns a byte-identical copy.
    """
    raster = require_rgb8(raster)
    if scale <= 0:
        raise InputError("scale must be positive")
    if scale == 1.0:
        return raster.copy()
    h_out = _round_half_up(raster.shape[0] * scale)
    w_out = _round_half_up(raster.shape[1] * scale)
    if h_out < 1 or w_out < 1:
        raise InputError(f"scale {scale} collapses a {raster.shape[1]}x{raster.shape[0]} raster to zero size")
    return kernels.resize_bilinear_u8(raster, h_out, w_out, scale, path=path)


def scale_points(points: list[PointLabel], scale: float) -> list[PointLabel]:
    """Apply the resize coordinate map to point labels."""
    return [PointLabel(x=p.x * scale, y=p.y * scale, origin_box=p.origin_box) for p in points]


def scale_boxes(boxes: list[BoxAnnotation], scale: float) -> list[BoxAnnotation]:
    """Apply the resize coordinate map to box annotations."""
    return [
        BoxAnnotation(
            image_id=b.image_id,
            x_min=b.x_min * scale,
            y_min=b.y_min * scale,
            box_w=b.box_w * scale,
            box_h=b.box_h * scale,
            class_label=b.class_label,
        )
        for b in boxes
    ]
