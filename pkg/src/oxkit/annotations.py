"""Ingestion of image metadata and box annotations; centroid conversion.

Two sources are supported: Label Studio JSON exports (rectangle results with
percent coordinates) and a plain box CSV. Coordinates are pixels with the
origin at the top-left corner, x rightward, y downward; sub-pixel reals are
allowed. Boxes partially outside the image are clamped, not rejected.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from .errors import InputError

KIND_REAL = "real"
KIND_SYNTHETIC = "synthetic"
_KINDS = (KIND_REAL, KIND_SYNTHETIC)

BOX_CSV_HEADER = ["image_id", "x_min", "y_min", "width", "height", "label"]


@dataclass(frozen=True)
class SurveyImage:
    """One source image with provenance and resolution metadata."""

    id: str
    path: str
    width_px: int
    height_px: int
    kind: str = KIND_REAL
    source_tag: str = ""
    gsd_cm_per_px: float | None = None

    def __post_init__(self):
        if self.width_px < 1 or self.height_px < 1:
            raise InputError(f"image {self.id!r}: dimensions must be >= 1")
        if self.kind not in _KINDS:
            raise InputError(f"image {self.id!r}: kind must be one of {_KINDS}")
        if self.gsd_cm_per_px is not None and self.gsd_cm_per_px <= 0:
            raise InputError(f"image {self.id!r}: gsd must be positive")


@dataclass(frozen=True)
class BoxAnnotation:
    """An animal instance as a pixel-space box."""

    image_id: str
    x_min: float
    y_min: float
    box_w: float
    box_h: float
    class_label: str = "muskox"

    def __post_init__(self):
        if self.box_w <= 0 or self.box_h <= 0:
            raise InputError(f"box on {self.image_id!r}: width/height must be > 0")
        if self.x_min < 0 or self.y_min < 0:
            raise InputError(f"box on {self.image_id!r}: origin must be >= 0")

    @property
    def long_side(self) -> float:
        return max(self.box_w, self.box_h)

    @property
    def area(self) -> float:
        return self.box_w * self.box_h


@dataclass(frozen=True)
class PointLabel:
    """A point label, usually the centroid of a box annotation."""

    x: float
    y: float
    origin_box: BoxAnnotation | None = None


def bbox_to_point(box: BoxAnnotation) -> PointLabel:
    """Convert a box to its centroid point label."""
    return PointLabel(x=box.x_min + box.box_w / 2.0, y=box.y_min + box.box_h / 2.0, origin_box=box)


@dataclass(frozen=True)
class ParseWarning:
    """A non-fatal problem found while ingesting annotations."""

    where: str
    message: str


@dataclass
class ParsedAnnotations:
    """Ingestion result: (image, boxes) pairs in input order, plus warnings."""

    items: list[tuple[SurveyImage, list[BoxAnnotation]]] = field(default_factory=list)
    warnings: list[ParseWarning] = field(default_factory=list)

    @property
    def boxes(self) -> list[BoxAnnotation]:
        return [b for _, group in self.items for b in group]


def _clamp_box(
    image_id: str, x_min: float, y_min: float, w: float, h: float, img_w: int, img_h: int
) -> BoxAnnotation | None:
    x0 = min(max(x_min, 0.0), float(img_w))
    y0 = min(max(y_min, 0.0), float(img_h))
    x1 = min(max(x_min + w, 0.0), float(img_w))
    y1 = min(max(y_min + h, 0.0), float(img_h))
    if x1 - x0 <= 0 or y1 - y0 <= 0:
        return None
    return BoxAnnotation(image_id=image_id, x_min=x0, y_min=y0, box_w=x1 - x0, box_h=y1 - y0)


def _task_image_ref(task: dict, index: int) -> str:
    data = task.get("data") or {}
    for key in ("image", "img", "image_url"):
        value = data.get(key)
        if isinstance(value, str) and value:
            return value
    return str(task.get("id", index))


def parse_labelstudio(document: str | bytes | list) -> ParsedAnnotations:
    """Parse a Label Studio JSON export into images and pixel-space boxes.

    Only rectangle results are consumed; other result types are counted in a
    warning. Percent coordinates are converted through each result's original
    image dimensions. Images with zero rectangles are still returned.
    """
    if isinstance(document, (str, bytes)):
        try:
            tasks = json.loads(document)
        except json.JSONDecodeError as exc:
            raise InputError(f"label-studio export is not valid JSON: {exc}") from exc
    else:
        tasks = document
    if not isinstance(tasks, list):
        raise InputError("label-studio export: top-level value must be a task list")

    result = ParsedAnnotations()
    for t_idx, task in enumerate(tasks):
        t_path = f"task[{t_idx}]"
        if not isinstance(task, dict):
            raise InputError(f"{t_path}: task must be an object")
        image_ref = _task_image_ref(task, t_idx)
        data = task.get("data") or {}
        kind = data.get("kind", KIND_REAL)
        source_tag = str(data.get("source", ""))
        gsd = data.get("gsd_cm_per_px")

        width = height = None
        boxes: list[BoxAnnotation] = []
        skipped_types = 0
        for a_idx, ann in enumerate(task.get("annotations") or []):
            for r_idx, res in enumerate(ann.get("result") or []):
                r_path = f"{t_path}.annotations[{a_idx}].result[{r_idx}]"
                if not isinstance(res, dict):
                    raise InputError(f"{r_path}: result must be an object")
                if res.get("type") != "rectanglelabels" and res.get("type") != "rectangle":
                    skipped_types += 1
                    continue
                ow, oh = res.get("original_width"), res.get("original_height")
                if not ow or not oh:
                    result.warnings.append(
                        ParseWarning(r_path, "missing original image dimensions; rectangle skipped")
                    )
                    continue
                ow, oh = int(ow), int(oh)
                if width is None:
                    width, height = ow, oh
                value = res.get("value") or {}
                try:
                    pct_x = float(value["x"])
                    pct_y = float(value["y"])
                    pct_w = float(value["width"])
                    pct_h = float(value["height"])
                except (KeyError, TypeError, ValueError) as exc:
                    raise InputError(f"{r_path}: malformed rectangle value: {exc}") from exc
                box = _clamp_box(
                    image_ref,
                    pct_x / 100.0 * ow,
                    pct_y / 100.0 * oh,
                    pct_w / 100.0 * ow,
                    pct_h / 100.0 * oh,
                    ow,
                    oh,
                )
                if box is None:
                    result.warnings.append(
                        ParseWarning(r_path, "empty box after clamping to image bounds; rejected")
                    )
                else:
                    boxes.append(box)
        if skipped_types:
            result.warnings.append(
                ParseWarning(t_path, f"ignored {skipped_types} non-rectangle result(s)")
            )
        if width is None:
            width = int(data.get("width", 0)) or 1
            height = int(data.get("height", 0)) or 1
            if "width" not in data or "height" not in data:
                result.warnings.append(
                    ParseWarning(t_path, "image dimensions unknown; recorded as 1x1 placeholder")
                )
        image = SurveyImage(
            id=image_ref,
            path=image_ref,
            width_px=width,
            height_px=height,
            kind=kind if kind in _KINDS else KIND_REAL,
            source_tag=source_tag,
            gsd_cm_per_px=float(gsd) if gsd else None,
        )
        result.items.append((image, boxes))
    return result


@dataclass
class ParsedBoxes:
    """Box-CSV ingestion result: surviving rows in order, plus row warnings."""

    boxes: list[BoxAnnotation] = field(default_factory=list)
    warnings: list[ParseWarning] = field(default_factory=list)


def parse_box_csv(text: str) -> ParsedBoxes:
    """Parse the box CSV (``image_id,x_min,y_min,width,height,label``).

    Bad rows are reported as warnings with their line number; remaining rows
    still parse. A wrong header is a hard error.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise InputError("box csv: empty file, expected header row") from None
    if [h.strip() for h in header] != BOX_CSV_HEADER:
        raise InputError(
            f"box csv: bad header {header!r}, expected {','.join(BOX_CSV_HEADER)}"
        )
    result = ParsedBoxes()
    for line_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != 6:
            result.warnings.append(
                ParseWarning(f"line {line_no}", f"expected 6 fields, got {len(row)}")
            )
            continue
        image_id, label = row[0].strip(), row[5].strip()
        try:
            x_min, y_min, w, h = (float(cell) for cell in row[1:5])
        except ValueError:
            result.warnings.append(ParseWarning(f"line {line_no}", "non-numeric coordinate field"))
            continue
        if w <= 0 or h <= 0:
            result.warnings.append(ParseWarning(f"line {line_no}", "non-positive box size; rejected"))
            continue
        if x_min < 0 or y_min < 0:
            result.warnings.append(ParseWarning(f"line {line_no}", "negative box origin; rejected"))
            continue
        result.boxes.append(
            BoxAnnotation(image_id=image_id, x_min=x_min, y_min=y_min, box_w=w, box_h=h, class_label=label)
        )
    return result


def boxes_to_csv(boxes: list[BoxAnnotation]) -> str:
    """Serialize boxes to the canonical CSV; parsing it back is lossless."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(BOX_CSV_HEADER)
    for b in boxes:
        writer.writerow([b.image_id, repr(b.x_min), repr(b.y_min), repr(b.box_w), repr(b.box_h), b.class_label])
    return out.getvalue()
