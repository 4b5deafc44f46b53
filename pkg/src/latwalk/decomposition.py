"""Joint law of (endpoint, visit count) assembled from first-passage laws.

A path that visits level ``a`` exactly ``ell >= 1`` times up to time ``n``
splits at its visits into three independent pieces: the first passage to
``a``, ``ell - 1`` excursions from ``a`` back to ``a`` (each distributed as
the first return time to 0), and a final stretch that leaves ``a`` for good.
The last piece is a walk avoiding its starting point, whose law at time
``u`` and position ``y != 0`` equals ``P[tau_y = u]`` by time reversal.

For ``a = x = 0`` the probability is ``P[Omega_ell = n]`` with no extra sum
over ``k``; the summation sign that sometimes appears in front of this case
would multiply the answer by ``n``.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from . import exact
from .convolve import convolve_arrays, self_convolve_power
from .errors import DomainError
from .pmf import Pmf
from .walk import WalkSpec


@lru_cache(maxsize=256)
def hitting_law(spec: WalkSpec, a: int, n: int) -> np.ndarray:
    """``P[tau_a = k]`` on ``k = 0..n``."""
    return exact._first_passage(spec, a, n, 0.0)


@lru_cache(maxsize=256)
def omega_law(spec: WalkSpec, u: int, n: int) -> np.ndarray:
    """``P[Omega_u = m]`` on ``m = 0..n``."""
    returns = Pmf(1, hitting_law(spec, 0, n)[1:])
    dense = self_convolve_power(returns, u, n).dense()
    dense.setflags(write=False)
    return dense


@lru_cache(maxsize=256)
def survival_law(spec: WalkSpec, n: int) -> np.ndarray:
    """``P[tau_0 > j]`` on ``j = 0..n``."""
    out = 1.0 - np.cumsum(hitting_law(spec, 0, n))
    out.setflags(write=False)
    return out


@lru_cache(maxsize=256)
def _prefix(spec: WalkSpec, a: int, ell: int, n: int) -> np.ndarray:
    """Law of the time of the ``ell``-th visit to ``a != 0``, on ``0..n``."""
    out = convolve_arrays(hitting_law(spec, a, n), omega_law(spec, ell - 1, n))[: n + 1]
    out.setflags(write=False)
    return out


def clear_caches() -> None:
    for fn in (hitting_law, omega_law, survival_law, _prefix):
        fn.cache_clear()


def _at_n(head: np.ndarray, tail: np.ndarray, n: int) -> float:
    """``sum_j head[j] * tail[n - j]`` for arrays on ``0..n``."""
    return float(np.dot(head[: n + 1], tail[n::-1]))


def _check(n: int, ell: int) -> None:
    if n < 1:
        raise DomainError(f"horizon must be >= 1, got {n}")
    if ell < 1:
        raise DomainError("ell = 0 is the avoiding law; use exact.avoid_pmf")
    if ell > n:
        raise DomainError(f"{ell} visits cannot fit in {n} steps")


def joint_via_decomposition(spec: WalkSpec, n: int, x: int, a: int, ell: int) -> float:
    """``P[S_n = x, Lambda^a_n = ell]`` for ``1 <= ell <= n``."""
    _check(n, ell)
    if a != 0:
        head = _prefix(spec, a, ell, n)
        if x == a:
            return float(head[n])
        return _at_n(head, hitting_law(spec, x - a, n), n)
    omega = omega_law(spec, ell, n)
    if x == 0:
        return float(omega[n])
    return _at_n(omega, hitting_law(spec, x, n), n)


def occupation_via_decomposition(spec: WalkSpec, n: int, a: int, ell: int) -> float:
    """``P[Lambda^a_n = ell]`` for ``1 <= ell <= n``."""
    _check(n, ell)
    head = _prefix(spec, a, ell, n) if a != 0 else omega_law(spec, ell, n)
    return _at_n(head, survival_law(spec, n), n)
