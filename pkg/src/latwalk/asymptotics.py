"""Closed-form limit densities for lattice walks with step variance ``nu``.

Conventions: ``a`` is the level, ``x`` the endpoint, ``ell`` the (scaled)
occupation count and ``n`` the time horizon.  ``phi`` always takes its
arguments in the order (level, endpoint, count), which is the order of the
Brownian joint density of ``(B_1, L^a)``.

Functions accept scalars or numpy arrays unless noted otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError
from .quadrature import gauss_kronrod, integrate
from .special import erf, erfc

SQRT_2PI = math.sqrt(2.0 * math.pi)
#: exp(-E) underflows to below 1e-300 for E above this
UNDERFLOW_EXPONENT = 690.0


@dataclass(frozen=True)
class LimitParams:
    nu: float
    n: float
    a: float = 0.0
    x: float = 0.0
    ell: float = 0.0

    def __post_init__(self):
        if not self.nu > 0:
            raise DomainError(f"variance must be positive, got {self.nu}")
        if not self.n > 0:
            raise DomainError(f"horizon must be positive, got {self.n}")
        if self.ell < 0:
            raise DomainError(f"occupation must be nonnegative, got {self.ell}")


def _positive(name: str, value) -> None:
    if np.any(np.asarray(value) <= 0):
        raise DomainError(f"{name} must be positive, got {value}")


def _out(value):
    return float(value) if np.ndim(value) == 0 else value


def phi(nu, a, x, ell):
    """Joint density of the endpoint and the local time at ``a`` at time 1."""
    _positive("nu", nu)
    _positive("ell", ell)
    s = np.abs(a) + np.abs(np.subtract(x, a)) + np.multiply(nu, ell)
    return _out(s * np.exp(-(s * s) / (2.0 * nu)) / np.sqrt(2.0 * math.pi * nu))


def psi(nu, a, ell):
    """Density of the local time at ``a`` at time 1."""
    _positive("nu", nu)
    _positive("ell", ell)
    s = np.abs(a) + np.multiply(nu, ell)
    return _out(2.0 * nu * np.exp(-(s * s) / (2.0 * nu)) / np.sqrt(2.0 * math.pi * nu))


def gaussian_density(nu, x):
    _positive("nu", nu)
    return _out(np.exp(-np.square(x) / (2.0 * nu)) / np.sqrt(2.0 * math.pi * nu))


def rayleigh_two_sided(nu, x):
    """Endpoint density of a walk conditioned never to return to its start."""
    _positive("nu", nu)
    return _out(np.abs(x) * np.exp(-np.square(x) / (2.0 * nu)) / (2.0 * nu))


def kaigh_hitting_density(nu, n, a):
    """Limit of ``n * P[S_n = a, tau_0 > n]`` (equivalently ``n * P[tau_a = n]``)."""
    _positive("nu", nu)
    _positive("n", n)
    return _out(np.abs(a) * np.exp(-np.square(a) / (2.0 * nu * n)) / np.sqrt(2.0 * math.pi * nu * n))


def uchiyama_avoid(nu, n, x, a):
    """Reflection approximation to ``sqrt(n) * P[S_n = x, Lambda^a_n = 0]``.

    Defined for ``a >= 0, x <= a`` and for ``a <= 0, x >= a``.
    """
    _positive("nu", nu)
    _positive("n", n)
    a_arr, x_arr = np.asarray(a), np.asarray(x)
    ok = ((a_arr >= 0) & (x_arr <= a_arr)) | ((a_arr <= 0) & (x_arr >= a_arr))
    if not np.all(ok):
        raise DomainError(f"endpoint {x} is on the far side of level {a}")
    root = math.sqrt(n) if np.ndim(n) == 0 else np.sqrt(n)
    return _out(gaussian_density(nu, x_arr / root) - gaussian_density(nu, (2 * a_arr - x_arr) / root))


def stable_omega_density(nu, n, ell, m):
    """Limit of ``n * P[Omega_{ell-1} = m]`` for ``ell`` of order ``sqrt(n)``."""
    for name, v in (("nu", nu), ("n", n), ("ell", ell), ("m", m)):
        _positive(name, v)
    scaled = np.divide(m, n)
    c = np.multiply(nu, ell)
    return _out(c * np.exp(-(c * c) / (2.0 * nu * n * scaled)) / np.sqrt(2.0 * math.pi * nu * n * scaled**3))


def survival_limit(nu) -> float:
    """Limit of ``sqrt(n) * P[tau_0 > n]``."""
    _positive("nu", nu)
    return math.sqrt(2.0 * nu / math.pi)


def avoid_prob_limit(nu, n, a):
    """Limit of ``P[Lambda^a_n = 0]`` for ``|a|`` of order ``sqrt(n)``."""
    _positive("nu", nu)
    _positive("n", n)
    return erf(np.abs(a) / np.sqrt(2.0 * nu * n))


def kaigh_tail(nu, z):
    """Limit of ``P[tau_n <= n^2 z]``."""
    _positive("nu", nu)
    _positive("z", z)
    return erfc(1.0 / np.sqrt(2.0 * nu * np.asarray(z)))


# ---------------------------------------------------------------------------
# integral identities


def hitting_density(y, u):
    """Density of the first hitting time of ``y > 0`` by standard Brownian motion."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    pos = u > 0
    up = u[pos]
    out[pos] = y * np.exp(-y * y / (2.0 * up)) / np.sqrt(2.0 * math.pi * up**3)
    return out


def heat_kernel(z, s):
    """``exp(-z^2 / 2s) / sqrt(2 pi s)`` for ``s > 0``."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    pos = s > 0
    sp = s[pos]
    out[pos] = np.exp(-z * z / (2.0 * sp)) / np.sqrt(2.0 * math.pi * sp)
    return out


def _inverted_limit(y: float, lower: float) -> float:
    # beyond this v the factor exp(-y^2 v / 2) is below 1e-300
    return max(2.0 * UNDERFLOW_EXPONENT / (y * y), lower)


def _hitting_left(y: float, other: Callable[[np.ndarray], np.ndarray], split: float, tol: float) -> float:
    """``int_0^split hitting_density(y, u) * other(u) du`` with ``v = 1/u``."""
    lo = 1.0 / split
    hi = _inverted_limit(y, lo)
    if hi == lo:
        return 0.0

    def g(v):
        # hitting_density(y, 1/v) / v^2 = y exp(-y^2 v / 2) / sqrt(2 pi v)
        return y * np.exp(-y * y * v / 2.0) / np.sqrt(2.0 * math.pi * v) * other(1.0 / v)

    return gauss_kronrod(g, lo, hi, tol)[0]


def hitting_convolution(y: float, z: float, t: float, tol: float = 1e-12) -> float:
    """``int_0^t hitting_density(y, u) hitting_density(z, t - u) du`` by quadrature."""
    half = 0.5 * t
    left = _hitting_left(y, lambda u: hitting_density(z, t - u), half, tol / 2)
    right = _hitting_left(z, lambda w: hitting_density(y, t - w), half, tol / 2)
    return left + right


def hitting_heat_convolution(y: float, z: float, t: float, tol: float = 1e-12) -> float:
    """``int_0^t hitting_density(y, u) heat_kernel(z, t - u) du`` by quadrature.

    The right end carries an ``(t - u)^(-1/2)`` singularity when ``z = 0``;
    substituting ``t - u = w^2`` removes it.
    """
    half = 0.5 * t
    left = _hitting_left(y, lambda u: heat_kernel(z, t - u), half, tol / 2)

    def g(w):
        # heat_kernel(z, w^2) * 2w = 2 exp(-z^2 / 2w^2) / sqrt(2 pi)
        return hitting_density(y, t - w * w) * 2.0 * np.exp(-z * z / (2.0 * w * w)) / SQRT_2PI

    right = gauss_kronrod(g, 0.0, math.sqrt(half), tol / 2)[0]
    return left + right


def integral_identity_check(which: int, y: float, z: float, t: float) -> tuple[float, float]:
    """Return ``(quadrature, closed form)`` for one of the two convolution identities.

    1: hitting density * hitting density = hitting density of ``y + z``.
    2: hitting density * heat kernel = heat kernel at ``y + z``.
    """
    if not (y > 0 and t > 0):
        raise DomainError("identities need y > 0 and t > 0")
    if which == 1:
        if not z > 0:
            raise DomainError("identity 1 needs z > 0")
        lhs = hitting_convolution(y, z, t)
        rhs = float(hitting_density(y + z, t))
    elif which == 2:
        if z < 0:
            raise DomainError("identity 2 needs z >= 0")
        lhs = hitting_heat_convolution(y, z, t)
        rhs = float(heat_kernel(y + z, t))
    else:
        raise DomainError(f"unknown identity {which!r}; expected 1 or 2")
    return lhs, rhs


def occupation_heuristic(nu: float, a: float, ell: float, tol: float = 1e-9) -> tuple[float, float]:
    """Nested quadrature of the three-piece convolution that produces ``psi``.

    The pieces are the hitting time of ``a``, the time ``nu * ell`` of local
    time takes to accumulate, and survival away from the level afterwards;
    returns ``(quadrature, psi(nu, a, ell))``.
    """
    if a == 0:
        raise DomainError("the first piece degenerates for a = 0")
    ya = abs(a) / math.sqrt(nu)
    yl = math.sqrt(nu) * ell

    def inner(s: float) -> float:
        if s <= 0:
            return 0.0
        # int_0^s h_{yl}(u) * 2 sqrt(nu) / sqrt(2 pi (s - u)) du
        return 2.0 * math.sqrt(nu) * hitting_heat_convolution(yl, 0.0, s, tol)

    def outer(t):
        t = np.atleast_1d(t)
        return hitting_density(ya, t) * np.array([inner(1.0 - ti) for ti in t])

    lhs = gauss_kronrod(outer, 0.0, 1.0, tol)[0]
    return lhs, psi(nu, a, ell)


def riemann_sum(f: Callable, c1: float, alpha: float, n: int, y=None) -> float:
    """``(1/n) * sum_{k = floor(n c1)}^{floor(n alpha) - 1} f(k/n, y)``."""
    if not c1 < alpha:
        raise DomainError(f"need c1 < alpha, got {c1} >= {alpha}")
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    ks = np.arange(math.floor(n * c1), math.floor(n * alpha))
    u = ks / n
    vals = f(u) if y is None else f(u, y)
    return math.fsum(np.broadcast_to(np.asarray(vals, dtype=float), u.shape)) / n


def phi_x_integral(nu: float, a: float, ell: float, tol: float = 1e-12) -> float:
    """``int phi(nu, a, x, ell) dx`` over the real line by quadrature."""
    return integrate(lambda x: phi(nu, a, x, ell), -math.inf, math.inf, tol, breakpoints=(0.0, a))


def total_mass(nu: float, a: float, tol: float = 1e-9) -> float:
    """Mass of ``phi`` over ``x`` and ``ell > 0`` plus the no-visit mass ``erf(|a|/sqrt(2 nu))``."""

    def over_x(ells):
        return np.array([phi_x_integral(nu, a, e, tol / 10) for e in np.atleast_1d(ells)])

    return integrate(over_x, 0.0, math.inf, tol) + erf(abs(a) / math.sqrt(2.0 * nu))


def uchiyama_x_integral(nu: float, n: float, a: float, tol: float = 1e-12) -> float:
    """``int uchiyama_avoid dx`` over the half-line on the start side of ``a``, per unit ``sqrt(n)``."""
    root = math.sqrt(n)
    if a >= 0:
        val = integrate(lambda x: uchiyama_avoid(nu, n, x, a), -math.inf, a, tol)
    else:
        val = integrate(lambda x: uchiyama_avoid(nu, n, x, a), a, math.inf, tol)
    return val / root


def identity_grid(values: Sequence[float] = (0.25, 0.5, 1.0, 2.0, 4.0), times: Sequence[float] = (0.5, 1.0, 2.0)):
    """All ``(which, y, z, t)`` on the standard check grid."""
    for which in (1, 2):
        for y in values:
            for z in values:
                for t in times:
                    yield which, y, z, t
