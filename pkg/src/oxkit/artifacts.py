"""Artifact writing: atomic promotion and schema/config embedding.

Files are written to a temp name in the destination directory and renamed
into place, so an interrupted run never leaves a half-written report. JSON
artifacts embed ``schema_version`` plus the resolved run configuration;
CSV artifacts (whose header is part of their wire contract) get a
``<name>.meta.json`` sidecar carrying the same information.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .errors import InputError

SCHEMA_VERSION = 1


def write_text_atomic(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_json_atomic(path: str | Path, doc: dict, config: dict | None = None) -> Path:
    body = dict(doc)
    body.setdefault("schema_version", SCHEMA_VERSION)
    if config is not None:
        body["config"] = config
    return write_text_atomic(path, json.dumps(body, indent=2, sort_keys=False) + "\n")


def write_csv_with_meta(path: str | Path, csv_text: str, config: dict, kind: str) -> Path:
    path = Path(path)
    write_text_atomic(path, csv_text)
    write_json_atomic(
        path.with_name(path.name + ".meta.json"),
        {"kind": kind, "artifact": path.name},
        config=config,
    )
    return path


def read_json(path: str | Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"input file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
