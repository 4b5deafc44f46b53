"""Error function and its complement in double precision.

For ``|x| <= 2.5`` erf uses the everywhere-positive series

    erf(x) = 2/sqrt(pi) * exp(-x^2) * sum_k 2^k x^(2k+1) / (1*3*...*(2k+1))

which has no cancellation.  Beyond that erfc is evaluated from its
continued fraction, summed backwards with a fixed depth.  Absolute error
stays below 1e-15 on the real line.
"""

from __future__ import annotations

import math

import numpy as np

SERIES_LIMIT = 2.5
CF_DEPTH = 80
_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)
_INV_SQRT_PI = 1.0 / math.sqrt(math.pi)


def _erf_series(x: float) -> float:
    x2 = x * x
    term = x
    total = x
    k = 0
    while abs(term) > 1e-17 * abs(total):
        k += 1
        term *= 2.0 * x2 / (2 * k + 1)
        total += term
    return _TWO_OVER_SQRT_PI * math.exp(-x2) * total


def _erfc_cf(x: float) -> float:
    # erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    f = x
    for k in range(CF_DEPTH, 0, -1):
        f = x + 0.5 * k / f
    return math.exp(-x * x) * _INV_SQRT_PI / f


def _erf_scalar(x: float) -> float:
    if math.isnan(x):
        return math.nan
    if abs(x) <= SERIES_LIMIT:
        return _erf_series(x)
    if math.isinf(x):
        return math.copysign(1.0, x)
    tail = _erfc_cf(abs(x))
    return math.copysign(1.0 - tail, x)


def _erfc_scalar(x: float) -> float:
    if math.isnan(x):
        return math.nan
    if abs(x) <= SERIES_LIMIT:
        return 1.0 - _erf_series(x)
    if math.isinf(x):
        return 0.0 if x > 0 else 2.0
    tail = _erfc_cf(abs(x))
    return tail if x > 0 else 2.0 - tail


def erf(x):
    """Error function; accepts scalars or arrays."""
    if np.ndim(x) == 0:
        return _erf_scalar(float(x))
    return np.vectorize(_erf_scalar, otypes=[float])(x)


def erfc(x):
    """Complementary error function, ``1 - erf(x)``."""
    if np.ndim(x) == 0:
        return _erfc_scalar(float(x))
    return np.vectorize(_erfc_scalar, otypes=[float])(x)
