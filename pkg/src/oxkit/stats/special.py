"""Scalar special-function kernels behind the statistical tests.

The regularized incomplete gamma function uses the classic split: a power
series on x < a + 1 and a modified-Lentz continued fraction above. The
regularized incomplete beta function uses the continued fraction with the
symmetry switch at x = (a + 1) / (a + b + 2). Chi-square and F CDFs are
thin wrappers over these kernels; the normal CDF comes from the C library's
erfc.
"""

from __future__ import annotations

import math
from statistics import NormalDist

from ..errors import InputError

_EPS = 1.0e-15
_FPMIN = 1.0e-300
_MAX_ITER = 1000

_STD_NORMAL = NormalDist()


def gammainc_p(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x)."""
    if a <= 0:
        raise InputError("gammainc: a must be positive")
    if x < 0:
        raise InputError("gammainc: x must be non-negative")
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return _gamma_series(a, x)
    return 1.0 - _gamma_contfrac(a, x)


def gammainc_q(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x)."""
    if a <= 0:
        raise InputError("gammainc: a must be positive")
    if x < 0:
        raise InputError("gammainc: x must be non-negative")
    if x == 0.0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_series(a, x)
    return _gamma_contfrac(a, x)


def _gamma_series(a: float, x: float) -> float:
    ap = a
    total = 1.0 / a
    delta = total
    for _ in range(_MAX_ITER):
        ap += 1.0
        delta *= x / ap
        total += delta
        if abs(delta) < abs(total) * _EPS:
            return total * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise InputError(f"gammainc series failed to converge for a={a}, x={x}")


def _gamma_contfrac(a: float, x: float) -> float:
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h
    raise InputError(f"gammainc continued fraction failed to converge for a={a}, x={x}")


def betainc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b)."""
    if a <= 0 or b <= 0:
        raise InputError("betainc: a and b must be positive")
    if x < 0 or x > 1:
        raise InputError("betainc: x must lie in [0, 1]")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_contfrac(a, b, x) / a
    return 1.0 - front * _beta_contfrac(b, a, 1.0 - x) / b


def _beta_contfrac(a: float, b: float, x: float) -> float:
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise InputError(f"betainc continued fraction failed to converge for a={a}, b={b}, x={x}")


def chi2_cdf(x: float, df: float) -> float:
    if df <= 0:
        raise InputError("chi-square df must be positive")
    if x <= 0:
        return 0.0
    return gammainc_p(df / 2.0, x / 2.0)


def chi2_sf(x: float, df: float) -> float:
    if df <= 0:
        raise InputError("chi-square df must be positive")
    if x <= 0:
        return 1.0
    return gammainc_q(df / 2.0, x / 2.0)


def f_cdf(x: float, df1: float, df2: float) -> float:
    if df1 <= 0 or df2 <= 0:
        raise InputError("F degrees of freedom must be positive")
    if x <= 0:
        return 0.0
    if math.isinf(x):
        return 1.0
    return betainc(df1 / 2.0, df2 / 2.0, df1 * x / (df1 * x + df2))


def f_sf(x: float, df1: float, df2: float) -> float:
    if df1 <= 0 or df2 <= 0:
        raise InputError("F degrees of freedom must be positive")
    if x <= 0:
        return 1.0
    if math.isinf(x):
        return 0.0
    # complementary form keeps precision in the far tail
    return betainc(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * x))


def normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def normal_quantile(p: float) -> float:
    if not 0.0 < p < 1.0:
        raise InputError("normal quantile needs p strictly inside (0, 1)")
    return _STD_NORMAL.inv_cdf(p)
