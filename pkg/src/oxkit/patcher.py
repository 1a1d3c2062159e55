"""Tiling of resized images into overlapping patches with label retention.

Tiles are 512x512 with 256 px overlap (stride 256) by default. A box
annotation belongs to a tile iff at least half of its area lies inside the
tile window; retained boxes contribute the centroid of the full box,
expressed in patch-local coordinates. Images smaller than the patch size
are zero-padded bottom/right first. Only patches containing at least one
animal are kept downstream.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .annotations import BoxAnnotation, PointLabel, bbox_to_point
from .errors import InputError
from .imaging.augment import pad_to_min
from .imaging.raster import require_rgb8


@dataclass(frozen=True)
class TileConfig:
    patch_w: int = 512
    patch_h: int = 512
    overlap: int = 256
    retention_fraction: float = 0.5

    def __post_init__(self):
        if not (0 < self.overlap < min(self.patch_w, self.patch_h)):
            raise InputError("overlap must satisfy 0 < overlap < patch dimension")
        if not (0 < self.retention_fraction <= 1):
            raise InputError("retention fraction must lie in (0, 1]")

    @property
    def stride_x(self) -> int:
        return self.patch_w - self.overlap

    @property
    def stride_y(self) -> int:
        return self.patch_h - self.overlap


@dataclass
class Patch:
    """One tile of a (resized) image with patch-local point labels."""

    parent_image_id: str
    origin_x: int
    origin_y: int
    labels: list[PointLabel] = field(default_factory=list)
    raster: np.ndarray | None = None

    @property
    def id(self) -> str:
        return f"{self.parent_image_id}_{self.origin_x}_{self.origin_y}"


def _axis_origins(dim: int, patch: int, stride: int) -> list[int]:
    origins = list(range(0, dim - patch + 1, stride))
    if origins[-1] + patch < dim:
        origins.append(dim - patch)
    return origins


def plan_tiles(width_px: int, height_px: int, cfg: TileConfig) -> list[tuple[int, int]]:
    """Row-major tile origins covering every pixel of the image.

    Origins sit at stride multiples; if the last one misses the edge, a
    clamped origin at (dim - patch) is appended per axis.
    """
    if width_px < cfg.patch_w or height_px < cfg.patch_h:
        raise InputError(
            f"image {width_px}x{height_px} smaller than patch "
            f"{cfg.patch_w}x{cfg.patch_h}; zero-pad it first"
        )
    xs = _axis_origins(width_px, cfg.patch_w, cfg.stride_x)
    ys = _axis_origins(height_px, cfg.patch_h, cfg.stride_y)
    return [(x, y) for y in ys for x in xs]


def box_tile_overlap_fraction(
    box: BoxAnnotation, origin_x: float, origin_y: float, cfg: TileConfig
) -> float:
    """Fraction of the box area covered by the tile window at the origin."""
    ix0 = max(box.x_min, origin_x)
    iy0 = max(box.y_min, origin_y)
    ix1 = min(box.x_min + box.box_w, origin_x + cfg.patch_w)
    iy1 = min(box.y_min + box.box_h, origin_y + cfg.patch_h)
    iw = max(0.0, ix1 - ix0)
    ih = max(0.0, iy1 - iy0)
    return (iw * ih) / box.area


def retained_points_for_tile(
    boxes: list[BoxAnnotation], origin_x: int, origin_y: int, cfg: TileConfig
) -> list[PointLabel]:
    """Centroid points of boxes meeting the retention rule, patch-local.

    Points are clamped to [0, patch - 0.001]; the retention rule guarantees
    the full-box centroid lies inside or on the tile boundary, so clamping
    moves a point by less than one pixel.
    """
    points: list[PointLabel] = []
    for box in boxes:
        if box_tile_overlap_fraction(box, origin_x, origin_y, cfg) >= cfg.retention_fraction:
            centroid = bbox_to_point(box)
            x = min(max(centroid.x - origin_x, 0.0), cfg.patch_w - 0.001)
            y = min(max(centroid.y - origin_y, 0.0), cfg.patch_h - 0.001)
            points.append(PointLabel(x=x, y=y, origin_box=box))
    return points


def extract_patches(
    image_id: str,
    raster: np.ndarray,
    boxes: list[BoxAnnotation],
    cfg: TileConfig | None = None,
) -> list[Patch]:
    """Tile a raster and attach retained point labels to every tile."""
    cfg = cfg or TileConfig()
    raster = require_rgb8(raster)
    raster = pad_to_min(raster, cfg.patch_h, cfg.patch_w)
    h, w = raster.shape[0], raster.shape[1]
    patches = []
    for ox, oy in plan_tiles(w, h, cfg):
        window = np.ascontiguousarray(raster[oy : oy + cfg.patch_h, ox : ox + cfg.patch_w])
        patches.append(
            Patch(
                parent_image_id=image_id,
                origin_x=ox,
                origin_y=oy,
                labels=retained_points_for_tile(boxes, ox, oy, cfg),
                raster=window,
            )
        )
    return patches


def filter_nonempty(patches: list[Patch]) -> list[Patch]:
    """Keep only patches with at least one label, preserving order."""
    return [p for p in patches if p.labels]


def points_to_csv(patches: list[Patch]) -> str:
    """Serialize patch-local points as ``patch_id,x,y`` rows."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["patch_id", "x", "y"])
    for patch in patches:
        for p in patch.labels:
            writer.writerow([patch.id, repr(p.x), repr(p.y)])
    return out.getvalue()


def points_from_csv(text: str) -> dict[str, list[PointLabel]]:
    """Parse a ``patch_id,x,y`` CSV into points grouped by patch id."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise InputError("points csv: empty file") from None
    if [h.strip() for h in header] != ["patch_id", "x", "y"]:
        raise InputError(f"points csv: bad header {header!r}")
    grouped: dict[str, list[PointLabel]] = {}
    for line_no, row in enumerate(reader, start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) != 3:
            raise InputError(f"points csv line {line_no}: expected 3 fields")
        try:
            x, y = float(row[1]), float(row[2])
        except ValueError as exc:
            raise InputError(f"points csv line {line_no}: non-numeric coordinate") from exc
        grouped.setdefault(row[0].strip(), []).append(PointLabel(x=x, y=y))
    return grouped
