"""Raster and tensor I/O.

Rasters are (H, W, 3) uint8 RGB numpy arrays, row-major. Normalized tensors
are stored in a small binary container (see ``write_tensor`` for the exact
byte layout, also documented in the README).
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np
from PIL import Image

from ..errors import InputError

TENSOR_MAGIC = b"OXTN"
TENSOR_VERSION = 1
_HEADER = struct.Struct("<4sIIII4s")  # magic, version, height, width, channels, order tag


def require_rgb8(raster: np.ndarray) -> np.ndarray:
    """Validate and return an (H, W, 3) uint8 RGB raster."""
    arr = np.asarray(raster)
    if arr.dtype != np.uint8 or arr.ndim != 3 or arr.shape[2] != 3:
        raise InputError(f"expected (H, W, 3) uint8 raster, got {arr.dtype} {arr.shape}")
    return arr


def save_png(path: str | Path, raster: np.ndarray) -> None:
    raster = require_rgb8(raster)
    Image.fromarray(raster, mode="RGB").save(str(path), format="PNG")


def load_png(path: str | Path) -> np.ndarray:
    try:
        with Image.open(str(path)) as img:
            return np.asarray(img.convert("RGB"), dtype=np.uint8)
    except FileNotFoundError:
        raise InputError(f"raster not found: {path}") from None
    except OSError as exc:
        raise InputError(f"cannot decode raster {path}: {exc}") from exc


def write_tensor(path: str | Path, tensor: np.ndarray) -> None:
    """Write a float32 (H, W, C) tensor.

    Byte layout (little-endian):
      bytes 0-3   magic ``OXTN``
      bytes 4-7   uint32 version (1)
      bytes 8-11  uint32 height
      bytes 12-15 uint32 width
      bytes 16-19 uint32 channels
      bytes 20-23 channel-order tag, ASCII ``HWC\\0``
      bytes 24-   height*width*channels float32 values, row-major (H, W, C)
    """
    arr = np.ascontiguousarray(tensor, dtype=np.float32)
    if arr.ndim != 3:
        raise InputError(f"expected (H, W, C) tensor, got shape {arr.shape}")
    h, w, c = arr.shape
    header = _HEADER.pack(TENSOR_MAGIC, TENSOR_VERSION, h, w, c, b"HWC\x00")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(arr.tobytes(order="C"))


def read_tensor(path: str | Path) -> np.ndarray:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise InputError(f"tensor file {path} too short for header")
    magic, version, h, w, c, order = _HEADER.unpack_from(raw)
    if magic != TENSOR_MAGIC:
        raise InputError(f"tensor file {path}: bad magic {magic!r}")
    if version != TENSOR_VERSION:
        raise InputError(f"tensor file {path}: unsupported version {version}")
    if order != b"HWC\x00":
        raise InputError(f"tensor file {path}: unsupported channel order {order!r}")
    expected = h * w * c * 4
    body = raw[_HEADER.size :]
    if len(body) != expected:
        raise InputError(f"tensor file {path}: expected {expected} payload bytes, got {len(body)}")
    return np.frombuffer(body, dtype="<f4").reshape(h, w, c).copy()
