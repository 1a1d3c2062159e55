"""Subcommand front-end tying the pipeline together.

Exit codes: 0 success, 2 configuration error, 3 input error, 4 internal
invariant violation. Artifacts are written atomically and embed the
resolved configuration and seed (CSV artifacts via a ``.meta.json``
sidecar).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import annotations as ann
from . import composer, patcher
from .artifacts import read_json, write_csv_with_meta, write_json_atomic
from .errors import ConfigError, InputError, InternalError, OxkitError
from .evaluator import (
    detection_stats_csv,
    evaluate_patches,
    metrics_rows_csv,
    parse_detections_jsonl,
    parse_metrics_csv,
)
from .evaluator.matching import MatchConfig
from .evaluator.metrics import DetectionStats, MetricsRow
from .genclient import GenRequest, GenStore, HttpBackend, StubBackend, format_fraction_pct
from .imaging.augment import AugmentConfig, augment
from .imaging import raster as rasterio
from .imaging import resize as rsz
from .stats import GroupedSamples, compare_models

DEFAULTS = {
    "seed": 0,
    "radius": 30.0,
    "alpha": 0.05,
    "jobs": 1,
    "ratio": 0.8,
    "folds": 5,
    "target_length": 100.0,
    "patch_w": 512,
    "patch_h": 512,
    "overlap": 256,
    "retention_fraction": 0.5,
    "match_mode": "greedy",
    "scope": "nonempty",
    "epochs": 300,
    "learning_rate": 0.001,
    "unit_cost_cents": 2,
    "levene_center": "mean",
    "dunn_adjustment": "bonferroni",
    "gen_base_url": "",
    "gen_model": "",
    "gen_max_retries": 3,
    "gen_backoff_s": 0.5,
}


def _safe_name(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]", "_", name)


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        doc = read_json(path)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    unknown = set(doc) - set(DEFAULTS)
    if unknown:
        raise ConfigError(f"config file {path}: unknown keys {sorted(unknown)}")
    return doc


def _resolve(args: argparse.Namespace) -> dict:
    """DEFAULTS <- config file <- explicit CLI flags."""
    cfg = dict(DEFAULTS)
    cfg.update(_load_config(getattr(args, "config", None)))
    for key in DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    cfg["command"] = args.command
    return cfg


def _tile_config(cfg: dict) -> patcher.TileConfig:
    return patcher.TileConfig(
        patch_w=int(cfg["patch_w"]),
        patch_h=int(cfg["patch_h"]),
        overlap=int(cfg["overlap"]),
        retention_fraction=float(cfg["retention_fraction"]),
    )


def _images_to_json(images: list[ann.SurveyImage]) -> dict:
    return {
        "kind": "image_index",
        "images": [
            {
                "id": s.id,
                "path": s.path,
                "width_px": s.width_px,
                "height_px": s.height_px,
                "kind": s.kind,
                "source_tag": s.source_tag,
                "gsd_cm_per_px": s.gsd_cm_per_px,
            }
            for s in images
        ],
    }


def _images_from_json(path: str) -> list[ann.SurveyImage]:
    doc = read_json(path)
    if doc.get("kind") != "image_index":
        raise InputError(f"{path}: not an image index file")
    return [
        ann.SurveyImage(
            id=d["id"],
            path=d["path"],
            width_px=int(d["width_px"]),
            height_px=int(d["height_px"]),
            kind=d.get("kind", "real"),
            source_tag=d.get("source_tag", ""),
            gsd_cm_per_px=d.get("gsd_cm_per_px"),
        )
        for d in doc["images"]
    ]


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise InputError(f"input file not found: {path}") from None


# ---------------------------------------------------------------------------
# subcommands

def cmd_ingest(args) -> int:
    cfg = _resolve(args)
    if not (args.labelstudio or args.boxes or args.images_meta):
        raise InputError("ingest needs --labelstudio, --boxes, or --images-meta")
    images: list[ann.SurveyImage] = []
    boxes: list[ann.BoxAnnotation] = []
    warnings: list[dict] = []
    if args.labelstudio:
        parsed = ann.parse_labelstudio(_read_text(args.labelstudio))
        for image, image_boxes in parsed.items:
            images.append(image)
            boxes.extend(image_boxes)
        warnings.extend({"where": w.where, "message": w.message} for w in parsed.warnings)
    if args.boxes:
        parsed_boxes = ann.parse_box_csv(_read_text(args.boxes))
        boxes.extend(parsed_boxes.boxes)
        warnings.extend({"where": w.where, "message": w.message} for w in parsed_boxes.warnings)
    if args.images_meta:
        images.extend(_images_from_json(args.images_meta))

    out = Path(args.out) / "annotations"
    write_json_atomic(out / "images.json", _images_to_json(images), config=cfg)
    write_csv_with_meta(out / "boxes.csv", ann.boxes_to_csv(boxes), cfg, kind="box_csv")
    write_json_atomic(out / "warnings.json", {"kind": "ingest_warnings", "warnings": warnings}, config=cfg)
    print(f"ingested {len(images)} image(s), {len(boxes)} box(es), {len(warnings)} warning(s)")
    return 0


def cmd_resize(args) -> int:
    cfg = _resolve(args)
    images = _images_from_json(args.images)
    boxes = ann.parse_box_csv(_read_text(args.boxes)).boxes
    target = float(cfg["target_length"])
    rasters_root = Path(args.rasters) if args.rasters else Path(".")

    by_image: dict[str, list[ann.BoxAnnotation]] = {}
    for b in boxes:
        by_image.setdefault(b.image_id, []).append(b)

    # per-image scale from its own animals; dataset-median fallback otherwise
    scales: dict[str, float] = {}
    for image in images:
        if by_image.get(image.id):
            scales[image.id] = rsz.estimate_scale(by_image[image.id], target)
    fallback = sorted(scales.values())[len(scales) // 2] if scales else 1.0

    out = Path(args.out) / "resized"
    raster_dir = out / "rasters"
    raster_dir.mkdir(parents=True, exist_ok=True)
    new_images: list[ann.SurveyImage] = []
    new_boxes: list[ann.BoxAnnotation] = []
    skipped = []
    for image in images:
        scale = scales.get(image.id, fallback)
        src = Path(image.path)
        if not src.is_absolute():
            src = rasters_root / src
        if not src.exists():
            skipped.append(image.id)
            continue
        raster = rasterio.load_png(src)
        resized = rsz.resize_bilinear(raster, scale)
        rasterio.save_png(raster_dir / f"{_safe_name(image.id)}.png", resized)
        new_images.append(
            ann.SurveyImage(
                id=image.id,
                path=f"rasters/{_safe_name(image.id)}.png",
                width_px=resized.shape[1],
                height_px=resized.shape[0],
                kind=image.kind,
                source_tag=image.source_tag,
                gsd_cm_per_px=image.gsd_cm_per_px,
            )
        )
        new_boxes.extend(rsz.scale_boxes(by_image.get(image.id, []), scale))

    write_json_atomic(out / "images.json", _images_to_json(new_images), config=cfg)
    write_csv_with_meta(out / "boxes.csv", ann.boxes_to_csv(new_boxes), cfg, kind="box_csv")
    write_json_atomic(
        out / "scales.json",
        {"kind": "scale_map", "target_length_px": target,
         "scales": {k: scales.get(k, fallback) for k in (i.id for i in images)},
         "skipped_missing_raster": skipped},
        config=cfg,
    )
    print(f"resized {len(new_images)} image(s) toward {target} px animals; skipped {len(skipped)}")
    return 0


def cmd_patch(args) -> int:
    cfg = _resolve(args)
    tile_cfg = _tile_config(cfg)
    resized = Path(args.resized)
    images = _images_from_json(str(resized / "images.json"))
    boxes = ann.parse_box_csv(_read_text(str(resized / "boxes.csv"))).boxes
    by_image: dict[str, list[ann.BoxAnnotation]] = {}
    for b in boxes:
        by_image.setdefault(b.image_id, []).append(b)

    out = Path(args.out) / "patches"
    raster_dir = out / "rasters"
    raster_dir.mkdir(parents=True, exist_ok=True)
    kept: list[patcher.Patch] = []
    total = 0
    for image in images:
        raster = rasterio.load_png(resized / image.path)
        patches = patcher.extract_patches(image.id, raster, by_image.get(image.id, []), tile_cfg)
        total += len(patches)
        for patch in patcher.filter_nonempty(patches):
            rasterio.save_png(raster_dir / f"{_safe_name(patch.id)}.png", patch.raster)
            kept.append(patch)

    write_json_atomic(
        out / "patch_manifest.json",
        {
            "kind": "patch_manifest",
            "tile": {
                "patch_w": tile_cfg.patch_w,
                "patch_h": tile_cfg.patch_h,
                "overlap": tile_cfg.overlap,
                "retention_fraction": tile_cfg.retention_fraction,
            },
            "patches": [
                {
                    "id": p.id,
                    "parent_image_id": p.parent_image_id,
                    "origin_x": p.origin_x,
                    "origin_y": p.origin_y,
                    "labels": [[lbl.x, lbl.y] for lbl in p.labels],
                }
                for p in kept
            ],
        },
        config=cfg,
    )
    write_csv_with_meta(out / "points.csv", patcher.points_to_csv(kept), cfg, kind="points_csv")
    n_labels = sum(len(p.labels) for p in kept)
    print(f"tiled {len(images)} image(s): {total} patch(es), kept {len(kept)} with {n_labels} animal(s)")
    return 0


def cmd_compose(args) -> int:
    cfg = _resolve(args)
    if not args.schedule:
        raise ConfigError("compose needs --schedule")
    real_pool = _images_from_json(args.real_pool) if args.real_pool else []
    synth_pool = _images_from_json(args.synth_pool) if args.synth_pool else []
    custom = None
    if args.schedule == "custom":
        if args.n_real is None or args.n_synthetic is None:
            raise ConfigError("custom schedule needs --n-real and --n-synthetic")
        custom = (args.n_real, args.n_synthetic)
    manifest = composer.compose(
        args.schedule, real_pool, synth_pool, seed=int(cfg["seed"]), custom_counts=custom
    )
    training = {"epochs": int(cfg["epochs"]), "learning_rate": float(cfg["learning_rate"])}
    out = Path(args.out) / "manifests" / f"{_safe_name(args.schedule)}.json"
    write_json_atomic(out, composer.manifest_to_dict(manifest, training=training), config=cfg)
    print(
        f"composed {manifest.name}: {len(manifest.real_images)} real + "
        f"{len(manifest.synthetic_images)} synthetic"
    )
    return 0


def cmd_split(args) -> int:
    cfg = _resolve(args)
    manifest = composer.manifest_from_dict(read_json(args.manifest))
    train, val = composer.split_train_val(manifest, ratio=float(cfg["ratio"]), seed=int(cfg["seed"]))
    base = Path(args.manifest).stem
    out = Path(args.out) / "manifests"
    training = {"epochs": int(cfg["epochs"]), "learning_rate": float(cfg["learning_rate"])}
    write_json_atomic(out / f"{base}-train.json", composer.manifest_to_dict(train, training), config=cfg)
    write_json_atomic(out / f"{base}-val.json", composer.manifest_to_dict(val, training), config=cfg)
    print(f"split {manifest.name}: {train.size} train / {val.size} val")
    return 0


def cmd_folds(args) -> int:
    cfg = _resolve(args)
    manifest = composer.manifest_from_dict(read_json(args.manifest))
    plan = composer.plan_folds(manifest, k=int(cfg["folds"]), seed=int(cfg["seed"]))
    out = Path(args.out) / "manifests" / f"{Path(args.manifest).stem}-folds.json"
    write_json_atomic(out, composer.fold_plan_to_dict(plan), config=cfg)
    sizes = [len(plan.fold_ids(i)) for i in range(plan.k)]
    print(f"planned {plan.k} folds over {manifest.size} image(s): sizes {sizes}")
    return 0


def cmd_augment_preview(args) -> int:
    cfg = _resolve(args)
    patches_dir = Path(args.patches)
    manifest = read_json(patches_dir / "patch_manifest.json")
    entries = manifest["patches"][: args.count]
    out = Path(args.out) / "augmented"
    out.mkdir(parents=True, exist_ok=True)
    acfg = AugmentConfig(seed=int(cfg["seed"]))
    rows = ["patch_id,x,y"]
    for entry in entries:
        raster = rasterio.load_png(patches_dir / "rasters" / f"{_safe_name(entry['id'])}.png")
        labels = [ann.PointLabel(x=x, y=y) for x, y in entry["labels"]]
        result = augment(raster, labels, acfg, patch_id=entry["id"])
        rasterio.save_png(out / f"{_safe_name(entry['id'])}.png", result.raster_u8)
        rasterio.write_tensor(out / f"{_safe_name(entry['id'])}.oxt", result.tensor)
        rows.extend(f"{entry['id']},{p.x!r},{p.y!r}" for p in result.labels)
    write_csv_with_meta(out / "points.csv", "\n".join(rows) + "\n", cfg, kind="points_csv")
    print(f"augmented {len(entries)} patch(es) into {out}")
    return 0


def cmd_evaluate(args) -> int:
    cfg = _resolve(args)
    tile_cfg = _tile_config(cfg)
    gt = patcher.points_from_csv(_read_text(args.points))
    det = parse_detections_jsonl(_read_text(args.detections), tile_cfg.patch_w, tile_cfg.patch_h)
    match_cfg = MatchConfig(radius_px=float(cfg["radius"]), mode=str(cfg["match_mode"]))
    row, stats, per_patch = evaluate_patches(
        gt, det, match_cfg, scope=str(cfg["scope"]), model=args.model, fold=args.fold
    )
    out = Path(args.out) / "eval" / f"{_safe_name(args.model)}_fold{args.fold}.json"
    write_json_atomic(
        out,
        {
            "kind": "evaluation",
            "model": args.model,
            "fold": args.fold,
            "scope": cfg["scope"],
            "metrics": {
                "ap": row.ap, "mae": row.mae, "mse": row.mse, "rmse": row.rmse,
                "precision": row.precision, "recall": row.recall, "f1": row.f1,
            },
            "detection_stats": {
                "n_patches": stats.n_patches,
                "tp_total": stats.tp_total, "fp_total": stats.fp_total, "fn_total": stats.fn_total,
                "tp_avg": stats.tp_avg, "fp_avg": stats.fp_avg, "fn_avg": stats.fn_avg,
            },
            "per_patch": {pid: list(counts) for pid, counts in sorted(per_patch.items())},
        },
        config=cfg,
    )
    print(
        f"{args.model} fold {args.fold}: P={row.precision:.3f} R={row.recall:.3f} "
        f"F1={row.f1:.3f} AP={row.ap:.3f}"
    )
    return 0


def cmd_report(args) -> int:
    cfg = _resolve(args)
    docs = []
    for source in args.eval:
        path = Path(source)
        if path.is_dir():
            docs.extend(read_json(p) for p in sorted(path.glob("*.json")))
        else:
            docs.append(read_json(path))
    docs = [d for d in docs if d.get("kind") == "evaluation"]
    if not docs:
        raise InputError("no evaluation artifacts found")
    rows = [
        MetricsRow(model=d["model"], fold=int(d["fold"]), **d["metrics"]) for d in docs
    ]
    stats_entries = [
        (
            d["model"],
            d.get("scope", "nonempty"),
            DetectionStats(**d["detection_stats"]),
        )
        for d in docs
    ]
    out = Path(args.out) / "reports"
    write_csv_with_meta(out / "metrics.csv", metrics_rows_csv(rows), cfg, kind="metrics_csv")
    write_csv_with_meta(
        out / "detection_stats.csv", detection_stats_csv(stats_entries), cfg, kind="detection_stats_csv"
    )
    print(f"reported {len(rows)} row(s) into {out}")
    return 0


def cmd_stats(args) -> int:
    cfg = _resolve(args)
    rows = parse_metrics_csv(_read_text(args.metrics))
    metric = args.metric
    if metric not in ("ap", "mae", "mse", "rmse", "precision", "recall", "f1"):
        raise ConfigError(f"unknown metric {metric!r}")
    grouped: dict[str, list[tuple[int, float]]] = {}
    for row in rows:
        grouped.setdefault(row.model, []).append((row.fold, getattr(row, metric)))
    samples = GroupedSamples(
        groups=[
            (model, [v for _, v in sorted(grouped[model])]) for model in sorted(grouped)
        ],
        metric_name=metric,
    )
    report = compare_models(
        samples,
        alpha=float(cfg["alpha"]),
        levene_center=str(cfg["levene_center"]),
        dunn_adjustment=str(cfg["dunn_adjustment"]),
    )
    out = Path(args.out) / "reports" / f"stat_report_{metric}.json"
    write_json_atomic(out, report.to_dict(), config=cfg)
    sig = "significant" if report.omnibus_p < report.alpha else "not significant"
    print(f"{metric}: {report.omnibus} p={report.omnibus_p:.4g} ({sig}); report at {out}")
    return 0


def _build_backend(args, cfg: dict):
    if args.backend == "stub":
        return StubBackend(seed=int(cfg["seed"]))
    if args.backend == "http":
        import os

        base_url = args.base_url or cfg["gen_base_url"]
        if not base_url:
            raise ConfigError("http backend needs --base-url or gen_base_url in the config file")
        return HttpBackend(
            base_url=base_url,
            api_key=os.environ.get("OXGEN_API_KEY"),
            model=str(cfg["gen_model"]) or None,
            max_retries=int(cfg["gen_max_retries"]),
            backoff_s=float(cfg["gen_backoff_s"]),
        )
    raise ConfigError(f"unknown backend {args.backend!r}")


def cmd_gen(args) -> int:
    cfg = _resolve(args)
    backend = _build_backend(args, cfg)
    store = GenStore(args.store)
    req = GenRequest(prompt=args.prompt, n=args.n, size=args.size, backend=args.backend)
    images, entry = store.generate_batch(req, backend, unit_cost_cents=int(cfg["unit_cost_cents"]))
    total = store.total_cost_cents()
    print(
        f"generated {len(images)} image(s) via {entry.backend} "
        f"(+{entry.total_cents} cents, ledger total {total} cents = ${total / 100:.2f})"
    )
    for image in images:
        print(f"  {image.id}")
    return 0


def cmd_curate_import(args) -> int:
    _resolve(args)
    store = GenStore(args.store)
    applied = store.import_decisions_csv(_read_text(args.decisions))
    rows = store.selection_report()
    print(f"applied {applied} decision(s)")
    for row in rows:
        print(
            f"  {row.group}: {row.kept}/{row.generated} kept "
            f"({format_fraction_pct(row.fraction)}), {row.pending} pending"
        )
    return 0


def cmd_serve_triage(args) -> int:
    _resolve(args)
    import uvicorn

    from .genclient import create_app

    store = GenStore(args.store)
    app = create_app(store, ui_dir=args.ui_dir)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except SystemExit as exc:  # uvicorn exits on port-busy startup errors
        raise InputError(f"triage service failed to start: {exc}") from exc
    return 0


# ---------------------------------------------------------------------------
# parser

def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", help="JSON config file; flags override it")
    sp.add_argument("--seed", type=int, default=None, help="RNG seed")
    sp.add_argument("--out", default="out", help="output directory root")
    sp.add_argument("--jobs", type=int, default=None, help="worker count hint")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oxkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse annotation exports into canonical artifacts")
    p.add_argument("--labelstudio", help="Label Studio JSON export")
    p.add_argument("--boxes", help="box CSV")
    p.add_argument("--images-meta", help="image index JSON to merge in")
    _add_common(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("resize", help="normalize resolution toward a target animal length")
    p.add_argument("--images", required=True, help="image index JSON")
    p.add_argument("--boxes", required=True, help="box CSV in source coordinates")
    p.add_argument("--rasters", help="directory with source rasters")
    p.add_argument("--target-length", dest="target_length", type=float, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_resize)

    p = sub.add_parser("patch", help="tile resized images into labeled patches")
    p.add_argument("--resized", required=True, help="resize output directory")
    p.add_argument("--patch-w", dest="patch_w", type=int, default=None)
    p.add_argument("--patch-h", dest="patch_h", type=int, default=None)
    p.add_argument("--overlap", type=int, default=None)
    p.add_argument("--retention", dest="retention_fraction", type=float, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_patch)

    p = sub.add_parser("compose", help="build a named dataset manifest")
    p.add_argument("--schedule", required=True)
    p.add_argument("--real-pool", help="image index JSON of real images")
    p.add_argument("--synth-pool", help="image index JSON of synthetic images")
    p.add_argument("--n-real", type=int, default=None, help="custom schedule real count")
    p.add_argument("--n-synthetic", type=int, default=None, help="custom schedule synthetic count")
    _add_common(p)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("split", help="80/20 image-level train/val split")
    p.add_argument("--manifest", required=True)
    p.add_argument("--ratio", type=float, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("folds", help="plan k-fold cross-validation")
    p.add_argument("--manifest", required=True)
    p.add_argument("--k", dest="folds", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_folds)

    p = sub.add_parser("augment-preview", help="run the augmentation pipeline on sample patches")
    p.add_argument("--patches", required=True, help="patch output directory")
    p.add_argument("--count", type=int, default=8)
    _add_common(p)
    p.set_defaults(func=cmd_augment_preview)

    p = sub.add_parser("evaluate", help="score detections against ground-truth points")
    p.add_argument("--points", required=True, help="ground-truth points CSV")
    p.add_argument("--detections", required=True, help="detections JSONL")
    p.add_argument("--model", default="model")
    p.add_argument("--fold", type=int, default=0)
    p.add_argument("--radius", type=float, default=None)
    p.add_argument("--mode", dest="match_mode", choices=["greedy", "optimal"], default=None)
    p.add_argument("--scope", choices=["nonempty", "all"], default=None)
    _add_common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", help="assemble metrics and detection-statistics CSVs")
    p.add_argument("--eval", nargs="+", required=True, help="evaluation JSONs or directories")
    _add_common(p)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("stats", help="statistical model comparison over a metrics CSV")
    p.add_argument("--metrics", required=True)
    p.add_argument("--metric", default="f1")
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--levene-center", dest="levene_center", choices=["mean", "median"], default=None)
    p.add_argument(
        "--dunn-adjustment", dest="dunn_adjustment", choices=["none", "bonferroni"], default=None
    )
    _add_common(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("gen", help="generate a batch of synthetic images")
    p.add_argument("--store", required=True, help="generation store directory")
    p.add_argument("--backend", choices=["stub", "http"], default="stub")
    p.add_argument("--prompt", default=GenRequest().prompt)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--size", type=int, choices=[256, 512, 1024], default=1024)
    p.add_argument("--base-url", help="http backend base URL")
    p.add_argument("--unit-cost-cents", dest="unit_cost_cents", type=int, default=None)
    _add_common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("curate-import", help="apply keep/discard decisions from CSV")
    p.add_argument("--store", required=True)
    p.add_argument("--decisions", required=True, help="CSV image_id,decision,reason")
    _add_common(p)
    p.set_defaults(func=cmd_curate_import)

    p = sub.add_parser("serve-triage", help="serve the curation API (and UI, if built)")
    p.add_argument("--store", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--ui-dir", dest="ui_dir", help="built frontend assets to serve at /")
    _add_common(p)
    p.set_defaults(func=cmd_serve_triage)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"oxkit {args.command}: config error: {exc}", file=sys.stderr)
        return 2
    except InputError as exc:
        print(f"oxkit {args.command}: input error: {exc}", file=sys.stderr)
        return 3
    except (InternalError, AssertionError) as exc:
        print(f"oxkit {args.command}: internal error: {exc}", file=sys.stderr)
        return 4
    except OxkitError as exc:
        print(f"oxkit {args.command}: error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
