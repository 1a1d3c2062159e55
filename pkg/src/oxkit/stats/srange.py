"""Studentized range distribution via Gauss-Legendre quadrature.

P(Q <= q; k, df) integrates, over the scale variable s = chi_df / sqrt(df),
the probability that the range of k standard normals stays below q * s:

    cdf = int_0^inf g(s) * k * int phi(z) [Phi(z) - Phi(z - q s)]^(k-1) dz ds

Both integrals run on fixed Gauss-Legendre grids over truncated domains
(12 standard deviations, far below the quadrature error floor). The hot
double loop has numba and numpy twins; results agree to ~1e-12 and are
validated against a seeded Monte Carlo oracle in the test suite.
"""

from __future__ import annotations

import math

import numpy as np

from .._dispatch import ACTIVE_PATH, njit, resolve_path
from ..errors import InputError

_N_OUTER = 128
_N_INNER = 160
_INV_SQRT_2PI = 0.3989422804014327
_INV_SQRT_2 = 0.7071067811865476
# beyond this df the scale variable is 1 to within quadrature accuracy
_DF_INFINITE = 1.0e7


def _gauss_legendre(n: int, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


def _srange_loops(
    q: float,
    k: float,
    df: float,
    s_nodes: np.ndarray,
    s_weights: np.ndarray,
    z_nodes: np.ndarray,
    z_weights: np.ndarray,
    ln_norm: float,
) -> float:
    total = 0.0
    for i in range(s_nodes.shape[0]):
        s = s_nodes[i]
        r = q * s
        inner = 0.0
        for j in range(z_nodes.shape[0]):
            z = z_nodes[j]
            phi = _INV_SQRT_2PI * math.exp(-0.5 * z * z)
            diff = 0.5 * math.erfc(-z * _INV_SQRT_2) - 0.5 * math.erfc(-(z - r) * _INV_SQRT_2)
            if diff > 0.0:
                inner += z_weights[j] * phi * diff ** (k - 1.0)
        rk = k * inner
        if rk > 1.0:
            rk = 1.0
        dens = math.exp(ln_norm + (df - 1.0) * math.log(s) - 0.5 * df * s * s)
        total += s_weights[i] * dens * rk
    return total


if ACTIVE_PATH == "numba":
    _srange_jit = njit(cache=True)(_srange_loops)
else:  # pragma: no cover - exercised via OXKIT_NO_NUMBA runs
    _srange_jit = _srange_loops


def _erfc_array(values: np.ndarray) -> np.ndarray:
    flat = values.ravel()
    out = np.array([math.erfc(v) for v in flat], dtype=np.float64)
    return out.reshape(values.shape)


def _srange_numpy(
    q: float,
    k: float,
    df: float,
    s_nodes: np.ndarray,
    s_weights: np.ndarray,
    z_nodes: np.ndarray,
    z_weights: np.ndarray,
    ln_norm: float,
) -> float:
    phi = _INV_SQRT_2PI * np.exp(-0.5 * z_nodes * z_nodes)
    cdf_hi = 0.5 * _erfc_array(-z_nodes * _INV_SQRT_2)
    r = q * s_nodes
    cdf_lo = 0.5 * _erfc_array(-(z_nodes[None, :] - r[:, None]) * _INV_SQRT_2)
    diff = np.maximum(cdf_hi[None, :] - cdf_lo, 0.0)
    inner = (z_weights[None, :] * phi[None, :] * diff ** (k - 1.0)).sum(axis=1)
    rk = np.minimum(k * inner, 1.0)
    dens = np.exp(ln_norm + (df - 1.0) * np.log(s_nodes) - 0.5 * df * s_nodes * s_nodes)
    return float((s_weights * dens * rk).sum())


def _range_only_cdf(q: float, k: float, z_nodes: np.ndarray, z_weights: np.ndarray) -> float:
    phi = _INV_SQRT_2PI * np.exp(-0.5 * z_nodes * z_nodes)
    cdf_hi = 0.5 * _erfc_array(-z_nodes * _INV_SQRT_2)
    cdf_lo = 0.5 * _erfc_array(-(z_nodes - q) * _INV_SQRT_2)
    diff = np.maximum(cdf_hi - cdf_lo, 0.0)
    return float(min(k * (z_weights * phi * diff ** (k - 1.0)).sum(), 1.0))


def studentized_range_cdf(q: float, k: int, df: float, path: str | None = None) -> float:
    """P(Q <= q) for the studentized range of k groups with df error dof."""
    if k < 2:
        raise InputError("studentized range needs k >= 2 groups")
    if df <= 0:
        raise InputError("studentized range needs positive df")
    if q <= 0.0:
        return 0.0
    z_nodes, z_weights = _gauss_legendre(_N_INNER, -9.0, 9.0)
    if df >= _DF_INFINITE:
        return _range_only_cdf(q, float(k), z_nodes, z_weights)

    spread = 12.0 / math.sqrt(2.0 * df)
    lo = max(0.0, 1.0 - spread)
    hi = 1.0 + spread
    s_nodes, s_weights = _gauss_legendre(_N_OUTER, lo, hi)
    ln_norm = (df / 2.0) * math.log(df) + (1.0 - df / 2.0) * math.log(2.0) - math.lgamma(df / 2.0)
    if resolve_path(path) == "numba":
        value = _srange_jit(
            float(q), float(k), float(df), s_nodes, s_weights, z_nodes, z_weights, ln_norm
        )
    else:
        value = _srange_numpy(
            float(q), float(k), float(df), s_nodes, s_weights, z_nodes, z_weights, ln_norm
        )
    return min(max(value, 0.0), 1.0)


def studentized_range_sf(q: float, k: int, df: float, path: str | None = None) -> float:
    """Upper tail probability 1 - cdf."""
    return 1.0 - studentized_range_cdf(q, k, df, path=path)
