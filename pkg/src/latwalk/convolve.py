"""Convolution of probability mass functions and truncated convolution powers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalError, ResourceError
from .pmf import Pmf

#: output length above which the FFT path is used
FFT_THRESHOLD = 256
#: FFT outputs in (-CLAMP_TOL, 0) are roundoff; anything below is a bug
CLAMP_TOL = 1e-12
MAX_LENGTH = 1 << 24


def _clamp(values: np.ndarray) -> np.ndarray:
    low = values.min(initial=0.0)
    if low <= -CLAMP_TOL:
        raise NumericalError(f"convolution produced {low!r}, below roundoff tolerance")
    np.maximum(values, 0.0, out=values)
    return values


def convolve_arrays(p: np.ndarray, q: np.ndarray, method: str = "auto") -> np.ndarray:
    """Full linear convolution of two nonnegative arrays."""
    if len(p) == 0 or len(q) == 0:
        return np.zeros(0)
    length = len(p) + len(q) - 1
    if length > MAX_LENGTH:
        raise ResourceError(f"convolution output length {length} exceeds cap {MAX_LENGTH}")
    if method == "auto":
        method = "fft" if length > FFT_THRESHOLD else "direct"
    if method == "direct":
        return np.convolve(p, q)
    if method != "fft":
        raise ValueError(f"unknown convolution method {method!r}")
    size = 1 << (length - 1).bit_length()
    out = np.fft.irfft(np.fft.rfft(p, size) * np.fft.rfft(q, size), size)[:length]
    return _clamp(out)


def convolve(p: Pmf, q: Pmf, method: str = "auto") -> Pmf:
    """Law of the sum of independent variables with laws ``p`` and ``q``."""
    return Pmf(p.offset + q.offset, convolve_arrays(p.values, q.values, method))


@dataclass(frozen=True, eq=False)
class OmegaLaw:
    """Law of a sum of ``u`` i.i.d. copies of a first-return time, kept on ``u..horizon``."""

    u: int
    horizon: int
    pmf: Pmf

    def __getitem__(self, m: int) -> float:
        return self.pmf[m]

    def dense(self) -> np.ndarray:
        """Values at ``m = 0..horizon`` (zeros below ``u``)."""
        return self.pmf.window(0, self.horizon)


def _truncated_product(p: np.ndarray, q: np.ndarray, horizon: int) -> np.ndarray:
    # both arrays are dense on 0..horizon
    return convolve_arrays(p, q)[: horizon + 1]


def self_convolve_power(p: Pmf, u: int, horizon: int) -> OmegaLaw:
    """Law of ``omega_1 + ... + omega_u`` restricted to values ``<= horizon``.

    ``p`` must live on ``{1, 2, ...}``.  Binary exponentiation truncates after
    every product; since supports only move up, the discarded mass can never
    come back below the horizon and the retained window is exact.
    """
    if u < 0 or int(u) != u:
        raise DomainError(f"number of summands must be a nonnegative integer, got {u!r}")
    if len(p) and p.offset < 1 and np.any(p.values[: max(1 - p.offset, 0)] != 0):
        raise DomainError("summand law has mass at indices < 1")
    u, horizon = int(u), int(horizon)
    if u == 0:
        return OmegaLaw(0, horizon, Pmf.delta(0).restrict(0, horizon))
    base = p.window(0, horizon)
    base[0] = 0.0
    result = None
    k = u
    while True:
        if k & 1:
            result = base.copy() if result is None else _truncated_product(result, base, horizon)
        k >>= 1
        if not k:
            break
        base = _truncated_product(base, base, horizon)
    # each summand is >= 1, so anything below u is FFT noise
    lo = min(u, horizon + 1)
    return OmegaLaw(u, horizon, Pmf(u, result[lo:].copy()))
