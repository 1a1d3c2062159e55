"""Hot raster and matching kernels, each with a numba twin and a numpy twin.

Both twins of a kernel evaluate the same floating-point expression tree in
the same order, so their outputs are bit-identical; tests assert that.
``OXKIT_NO_NUMBA=1`` routes everything through the numpy twins. 8-bit
outputs are quantized with floor(x + 0.5).
"""

from __future__ import annotations

import math

import numpy as np

from ._dispatch import ACTIVE_PATH, njit, resolve_path


# ---------------------------------------------------------------------------
# bilinear resize

def _resize_bilinear_loops(src: np.ndarray, out: np.ndarray, scale: float) -> None:
    h_in, w_in = src.shape[0], src.shape[1]
    h_out, w_out = out.shape[0], out.shape[1]
    for i in range(h_out):
        sy = (i + 0.5) / scale - 0.5
        sy = min(max(sy, 0.0), h_in - 1.0)
        y0 = int(math.floor(sy))
        fy = sy - y0
        y1 = min(y0 + 1, h_in - 1)
        for j in range(w_out):
            sx = (j + 0.5) / scale - 0.5
            sx = min(max(sx, 0.0), w_in - 1.0)
            x0 = int(math.floor(sx))
            fx = sx - x0
            x1 = min(x0 + 1, w_in - 1)
            for c in range(src.shape[2]):
                a = float(src[y0, x0, c])
                b = float(src[y0, x1, c])
                cc = float(src[y1, x0, c])
                d = float(src[y1, x1, c])
                top = a + (b - a) * fx
                bot = cc + (d - cc) * fx
                val = top + (bot - top) * fy
                out[i, j, c] = np.uint8(math.floor(val + 0.5))


def _resize_bilinear_numpy(src: np.ndarray, h_out: int, w_out: int, scale: float) -> np.ndarray:
    h_in, w_in = src.shape[0], src.shape[1]
    sy = (np.arange(h_out, dtype=np.float64) + 0.5) / scale - 0.5
    sy = np.minimum(np.maximum(sy, 0.0), h_in - 1.0)
    y0 = np.floor(sy).astype(np.int64)
    fy = sy - y0
    y1 = np.minimum(y0 + 1, h_in - 1)
    sx = (np.arange(w_out, dtype=np.float64) + 0.5) / scale - 0.5
    sx = np.minimum(np.maximum(sx, 0.0), w_in - 1.0)
    x0 = np.floor(sx).astype(np.int64)
    fx = sx - x0
    x1 = np.minimum(x0 + 1, w_in - 1)

    srcf = src.astype(np.float64)
    a = srcf[y0[:, None], x0[None, :], :]
    b = srcf[y0[:, None], x1[None, :], :]
    cc = srcf[y1[:, None], x0[None, :], :]
    d = srcf[y1[:, None], x1[None, :], :]
    fxb = fx[None, :, None]
    fyb = fy[:, None, None]
    top = a + (b - a) * fxb
    bot = cc + (d - cc) * fxb
    val = top + (bot - top) * fyb
    return np.floor(val + 0.5).astype(np.uint8)


def resize_bilinear_u8(
    src: np.ndarray, h_out: int, w_out: int, scale: float, path: str | None = None
) -> np.ndarray:
    """Resize an (H, W, C) uint8 raster with center-aligned bilinear sampling."""
    if src.dtype != np.uint8 or src.ndim != 3:
        raise ValueError("expected an (H, W, C) uint8 raster")
    if h_out < 1 or w_out < 1:
        raise ValueError("output dimensions must be >= 1")
    if resolve_path(path) == "numba":
        out = np.empty((h_out, w_out, src.shape[2]), dtype=np.uint8)
        _resize_bilinear_jit(np.ascontiguousarray(src), out, float(scale))
        return out
    return _resize_bilinear_numpy(src, h_out, w_out, float(scale))


# ---------------------------------------------------------------------------
# box blur (kernel extent 2..4; even extents anchor the output pixel at the
# window's top-left, odd extents center it; edges clamp)

def _blur_offsets(k: int) -> tuple[int, int]:
    off0 = 0 if k % 2 == 0 else -(k // 2)
    return off0, off0 + k


def _box_blur_loops(src: np.ndarray, out: np.ndarray, off0: int, off1: int) -> None:
    h, w = src.shape[0], src.shape[1]
    k2 = float((off1 - off0) * (off1 - off0))
    for i in range(h):
        for j in range(w):
            for c in range(src.shape[2]):
                acc = 0.0
                for dy in range(off0, off1):
                    yy = min(max(i + dy, 0), h - 1)
                    for dx in range(off0, off1):
                        xx = min(max(j + dx, 0), w - 1)
                        acc += float(src[yy, xx, c])
                out[i, j, c] = np.uint8(math.floor(acc / k2 + 0.5))


def _box_blur_numpy(src: np.ndarray, off0: int, off1: int) -> np.ndarray:
    h, w = src.shape[0], src.shape[1]
    k2 = float((off1 - off0) * (off1 - off0))
    srcf = src.astype(np.float64)
    rows = np.arange(h)
    cols = np.arange(w)
    acc = np.zeros_like(srcf)
    for dy in range(off0, off1):
        yy = np.minimum(np.maximum(rows + dy, 0), h - 1)
        for dx in range(off0, off1):
            xx = np.minimum(np.maximum(cols + dx, 0), w - 1)
            acc += srcf[yy[:, None], xx[None, :], :]
    return np.floor(acc / k2 + 0.5).astype(np.uint8)


def box_blur_u8(src: np.ndarray, k: int, path: str | None = None) -> np.ndarray:
    """Box-blur an (H, W, C) uint8 raster with a k-by-k window."""
    if src.dtype != np.uint8 or src.ndim != 3:
        raise ValueError("expected an (H, W, C) uint8 raster")
    if k < 1:
        raise ValueError("kernel extent must be >= 1")
    off0, off1 = _blur_offsets(k)
    if resolve_path(path) == "numba":
        out = np.empty_like(src)
        _box_blur_jit(np.ascontiguousarray(src), out, off0, off1)
        return out
    return _box_blur_numpy(src, off0, off1)


# ---------------------------------------------------------------------------
# HSV shift on the 8-bit convention: H in [0, 180) (degrees / 2), S and V in
# [0, 255]; hue wraps, saturation and value saturate

def _hsv_shift_loops(
    src: np.ndarray, out: np.ndarray, dh: float, ds: float, dv: float
) -> None:
    h_img, w_img = src.shape[0], src.shape[1]
    for i in range(h_img):
        for j in range(w_img):
            r = float(src[i, j, 0])
            g = float(src[i, j, 1])
            b = float(src[i, j, 2])
            mx = max(r, max(g, b))
            mn = min(r, min(g, b))
            c = mx - mn
            v = mx
            s = 0.0 if mx == 0.0 else 255.0 * c / mx
            if c == 0.0:
                h = 0.0
            elif mx == r:
                h = 30.0 * (g - b) / c
                if h < 0.0:
                    h += 180.0
            elif mx == g:
                h = 60.0 + 30.0 * (b - r) / c
            else:
                h = 120.0 + 30.0 * (r - g) / c
            hs = h + dh
            h2 = hs - math.floor(hs / 180.0) * 180.0
            s2 = min(max(s + ds, 0.0), 255.0)
            v2 = min(max(v + dv, 0.0), 255.0)

            cc = v2 * s2 / 255.0
            hp = h2 * 2.0 / 60.0
            x = cc * (1.0 - abs(hp - math.floor(hp / 2.0) * 2.0 - 1.0))
            m = v2 - cc
            sector = int(hp)
            if sector == 0:
                rr, gg, bb = cc, x, 0.0
            elif sector == 1:
                rr, gg, bb = x, cc, 0.0
            elif sector == 2:
                rr, gg, bb = 0.0, cc, x
            elif sector == 3:
                rr, gg, bb = 0.0, x, cc
            elif sector == 4:
                rr, gg, bb = x, 0.0, cc
            else:
                rr, gg, bb = cc, 0.0, x
            out[i, j, 0] = np.uint8(math.floor(rr + m + 0.5))
            out[i, j, 1] = np.uint8(math.floor(gg + m + 0.5))
            out[i, j, 2] = np.uint8(math.floor(bb + m + 0.5))


def _hsv_shift_numpy(src: np.ndarray, dh: float, ds: float, dv: float) -> np.ndarray:
    r = src[:, :, 0].astype(np.float64)
    g = src[:, :, 1].astype(np.float64)
    b = src[:, :, 2].astype(np.float64)
    mx = np.maximum(r, np.maximum(g, b))
    mn = np.minimum(r, np.minimum(g, b))
    c = mx - mn
    v = mx
    mx_safe = np.where(mx == 0.0, 1.0, mx)
    s = np.where(mx == 0.0, 0.0, 255.0 * c / mx_safe)
    c_safe = np.where(c == 0.0, 1.0, c)
    h_r = 30.0 * (g - b) / c_safe
    h_r = np.where(h_r < 0.0, h_r + 180.0, h_r)
    h_g = 60.0 + 30.0 * (b - r) / c_safe
    h_b = 120.0 + 30.0 * (r - g) / c_safe
    h = np.where(c == 0.0, 0.0, np.where(mx == r, h_r, np.where(mx == g, h_g, h_b)))

    hs = h + dh
    h2 = hs - np.floor(hs / 180.0) * 180.0
    s2 = np.minimum(np.maximum(s + ds, 0.0), 255.0)
    v2 = np.minimum(np.maximum(v + dv, 0.0), 255.0)

    cc = v2 * s2 / 255.0
    hp = h2 * 2.0 / 60.0
    x = cc * (1.0 - np.abs(hp - np.floor(hp / 2.0) * 2.0 - 1.0))
    m = v2 - cc
    sector = hp.astype(np.int64)
    zero = np.zeros_like(cc)
    rr = np.select(
        [sector == 0, sector == 1, sector == 2, sector == 3, sector == 4],
        [cc, x, zero, zero, x],
        default=cc,
    )
    gg = np.select(
        [sector == 0, sector == 1, sector == 2, sector == 3, sector == 4],
        [x, cc, cc, x, zero],
        default=zero,
    )
    bb = np.select(
        [sector == 0, sector == 1, sector == 2, sector == 3, sector == 4],
        [zero, zero, x, cc, cc],
        default=x,
    )
    out = np.stack(
        [
            np.floor(rr + m + 0.5),
            np.floor(gg + m + 0.5),
            np.floor(bb + m + 0.5),
        ],
        axis=-1,
    )
    return out.astype(np.uint8)


def hsv_shift_u8(
    src: np.ndarray, dh: float, ds: float, dv: float, path: str | None = None
) -> np.ndarray:
    """Shift hue/saturation/value of an (H, W, 3) uint8 RGB raster."""
    if src.dtype != np.uint8 or src.ndim != 3 or src.shape[2] != 3:
        raise ValueError("expected an (H, W, 3) uint8 RGB raster")
    if resolve_path(path) == "numba":
        out = np.empty_like(src)
        _hsv_shift_jit(np.ascontiguousarray(src), out, float(dh), float(ds), float(dv))
        return out
    return _hsv_shift_numpy(src, float(dh), float(ds), float(dv))


# ---------------------------------------------------------------------------
# brightness / contrast (saturating)

def _brightness_contrast_loops(
    src: np.ndarray, out: np.ndarray, alpha: float, beta: float
) -> None:
    h, w = src.shape[0], src.shape[1]
    for i in range(h):
        for j in range(w):
            for c in range(src.shape[2]):
                val = float(src[i, j, c]) * alpha + beta * 255.0
                val = min(max(val, 0.0), 255.0)
                out[i, j, c] = np.uint8(math.floor(val + 0.5))


def _brightness_contrast_numpy(src: np.ndarray, alpha: float, beta: float) -> np.ndarray:
    val = src.astype(np.float64) * alpha + beta * 255.0
    val = np.minimum(np.maximum(val, 0.0), 255.0)
    return np.floor(val + 0.5).astype(np.uint8)


def brightness_contrast_u8(
    src: np.ndarray, brightness: float, contrast: float, path: str | None = None
) -> np.ndarray:
    """Apply ``x * (1 + contrast) + brightness * 255`` with saturation to [0, 255]."""
    if src.dtype != np.uint8 or src.ndim != 3:
        raise ValueError("expected an (H, W, C) uint8 raster")
    alpha = 1.0 + float(contrast)
    beta = float(brightness)
    if resolve_path(path) == "numba":
        out = np.empty_like(src)
        _brightness_contrast_jit(np.ascontiguousarray(src), out, alpha, beta)
        return out
    return _brightness_contrast_numpy(src, alpha, beta)


# ---------------------------------------------------------------------------
# greedy point matching: detections (already sorted by priority) each take the
# nearest unmatched ground truth within the radius; distance ties break on
# ascending ground-truth (x, y), then index

def _greedy_match_loops(gt: np.ndarray, det: np.ndarray, r2: float, match: np.ndarray) -> None:
    n_gt = gt.shape[0]
    n_det = det.shape[0]
    used = np.zeros(n_gt, dtype=np.bool_)
    for i in range(n_det):
        best = -1
        best_d2 = 0.0
        for j in range(n_gt):
            if used[j]:
                continue
            dx = det[i, 0] - gt[j, 0]
            dy = det[i, 1] - gt[j, 1]
            d2 = dx * dx + dy * dy
            if d2 > r2:
                continue
            if best < 0:
                take = True
            elif d2 < best_d2:
                take = True
            elif d2 == best_d2 and (
                gt[j, 0] < gt[best, 0]
                or (gt[j, 0] == gt[best, 0] and gt[j, 1] < gt[best, 1])
            ):
                take = True
            else:
                take = False
            if take:
                best = j
                best_d2 = d2
        match[i] = best
        if best >= 0:
            used[best] = True


def _greedy_match_numpy(gt: np.ndarray, det: np.ndarray, r2: float) -> np.ndarray:
    n_gt = gt.shape[0]
    n_det = det.shape[0]
    match = np.full(n_det, -1, dtype=np.int64)
    used = np.zeros(n_gt, dtype=bool)
    for i in range(n_det):
        dx = det[i, 0] - gt[:, 0]
        dy = det[i, 1] - gt[:, 1]
        d2 = dx * dx + dy * dy
        cand = np.flatnonzero(~used & (d2 <= r2))
        if cand.size == 0:
            continue
        order = np.lexsort((gt[cand, 1], gt[cand, 0], d2[cand]))
        best = cand[order[0]]
        match[i] = best
        used[best] = True
    return match


def greedy_match(
    gt: np.ndarray, det: np.ndarray, radius: float, path: str | None = None
) -> np.ndarray:
    """Match (N, 2) detections against (M, 2) ground truths within ``radius``.

    Detections must already be in processing order. Returns, per detection,
    the index of the ground truth it claimed, or -1.
    """
    gt = np.ascontiguousarray(gt, dtype=np.float64).reshape(-1, 2)
    det = np.ascontiguousarray(det, dtype=np.float64).reshape(-1, 2)
    r2 = float(radius) * float(radius)
    if resolve_path(path) == "numba":
        match = np.empty(det.shape[0], dtype=np.int64)
        _greedy_match_jit(gt, det, r2, match)
        return match
    return _greedy_match_numpy(gt, det, r2)


# ---------------------------------------------------------------------------
# compile the numba twins once at import (no-op decorator on the numpy path)

if ACTIVE_PATH == "numba":
    _resize_bilinear_jit = njit(cache=True)(_resize_bilinear_loops)
    _box_blur_jit = njit(cache=True)(_box_blur_loops)
    _hsv_shift_jit = njit(cache=True)(_hsv_shift_loops)
    _brightness_contrast_jit = njit(cache=True)(_brightness_contrast_loops)
    _greedy_match_jit = njit(cache=True)(_greedy_match_loops)
else:  # pragma: no cover - exercised via OXKIT_NO_NUMBA runs
    _resize_bilinear_jit = _resize_bilinear_loops
    _box_blur_jit = _box_blur_loops
    _hsv_shift_jit = _hsv_shift_loops
    _brightness_contrast_jit = _brightness_contrast_loops
    _greedy_match_jit = _greedy_match_loops
