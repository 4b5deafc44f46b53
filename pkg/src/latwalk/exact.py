"""Exact finite-n laws of a lattice walk started at 0, by dynamic programming.

All sweeps push a probability vector through one step at a time with
``np.convolve`` against the step law, so nothing is approximated beyond
double-precision roundoff.  Visits to a level are counted at times ``1..n``;
time 0 never counts, even for level 0.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterator

import numpy as np

from .errors import ResourceError
from .pmf import Pmf
from .walk import WalkSpec

log = logging.getLogger(__name__)

#: largest admissible ``n * max_step`` for one-dimensional sweeps
TABLE_CAP = 2_000_000
#: largest horizon for the (position, visit count) brute-force table
JOINT_CAP = 64
#: largest horizon for :func:`occupation_pmf`, which runs the same 2-d sweep
OCCUPATION_CAP = 256


def _check_width(spec: WalkSpec, n: int, cap: int | None) -> None:
    cap = TABLE_CAP if cap is None else cap
    if n * spec.max_step > cap:
        raise ResourceError(f"n * max_step = {n * spec.max_step} exceeds table cap {cap}")


def _check_horizon(n: int, name: str = "n", minimum: int = 1) -> None:
    if int(n) != n or n < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {n!r}")


def marginal_pmf(spec: WalkSpec, n: int, cap: int | None = None) -> Pmf:
    """Law of ``S_n``."""
    _check_horizon(n)
    _check_width(spec, n, cap)
    return Pmf(*_marginal(spec, int(n)))


@lru_cache(maxsize=64)
def _marginal(spec: WalkSpec, n: int) -> tuple[int, np.ndarray]:
    probs = spec.step.as_array()
    dist = np.ones(1)
    for _ in range(n):
        dist = np.convolve(dist, probs)
    dist.setflags(write=False)
    return n * spec.step.min_step, dist


@lru_cache(maxsize=512)
def _first_passage(spec: WalkSpec, a: int, N: int, cutoff: float) -> np.ndarray:
    """``f[k] = P[tau_a = k]`` for ``k = 0..N`` (``f[0] = 0``).

    Mass from which ``a`` can no longer be reached before ``N`` is dropped,
    which is exact for every ``k <= N``.  With ``cutoff > 0`` edge entries
    below the cutoff are dropped as well; the discarded mass is logged.
    """
    probs = spec.step.as_array()
    up, down = spec.max_up, spec.max_down
    f = np.zeros(N + 1)
    offset, dist = 0, np.ones(1)
    trimmed = 0.0
    for k in range(1, N + 1):
        dist = np.convolve(dist, probs)
        offset += spec.step.min_step
        i = a - offset
        if 0 <= i < len(dist):
            f[k] = dist[i]
            dist[i] = 0.0
        # keep x with a - x <= r*up and x - a <= r*down, r steps remaining
        r = N - k
        lo = max(offset, a - r * up)
        hi = min(offset + len(dist) - 1, a + r * down)
        if lo > hi:
            break
        dist = dist[lo - offset : hi - offset + 1]
        offset = lo
        if cutoff > 0.0:
            keep = np.flatnonzero(dist >= cutoff)
            if len(keep) == 0:
                trimmed += float(dist.sum())
                break
            j0, j1 = int(keep[0]), int(keep[-1])
            trimmed += float(dist[:j0].sum() + dist[j1 + 1 :].sum())
            dist = dist[j0 : j1 + 1]
            offset += j0
    if trimmed:
        log.debug("first passage to %d, N=%d: trimmed mass %.3g", a, N, trimmed)
    f.setflags(write=False)
    return f


def first_passage_pmf(spec: WalkSpec, a: int, N: int, cutoff: float = 0.0, cap: int | None = None) -> Pmf:
    """``P[tau_a = k]`` for ``k = 1..N`` where ``tau_a = min{k >= 1 : S_k = a}``.

    The returned Pmf carries partial mass (at most 1).  ``cutoff`` trades
    exactness for speed at large ``N`` by discarding DP entries below it.
    """
    _check_horizon(N, "N")
    _check_width(spec, N, cap)
    f = _first_passage(spec, int(a), int(N), float(cutoff))
    return Pmf(1, f[1:])


def survival_tail(spec: WalkSpec, N: int, cutoff: float = 0.0, cap: int | None = None) -> np.ndarray:
    """``P[tau_0 > n]`` for ``n = 0..N``; the first entry is 1."""
    _check_horizon(N, "N", minimum=0)
    if N == 0:
        return np.ones(1)
    _check_width(spec, N, cap)
    f = _first_passage(spec, 0, int(N), float(cutoff))
    return 1.0 - np.cumsum(f)


def iter_avoid(spec: WalkSpec, a: int, n: int) -> Iterator[Pmf]:
    """Yield ``x -> P[S_k = x, Lambda^a_k = 0]`` for ``k = 1..n``."""
    probs = spec.step.as_array()
    offset, dist = 0, np.ones(1)
    for _ in range(n):
        dist = np.convolve(dist, probs)
        offset += spec.step.min_step
        i = a - offset
        if 0 <= i < len(dist):
            dist[i] = 0.0
        yield Pmf(offset, dist.copy())


def avoid_pmf(spec: WalkSpec, a: int, n: int, cap: int | None = None) -> Pmf:
    """Law of the walk killed on hitting ``a`` at times ``1..n``."""
    _check_horizon(n)
    _check_width(spec, n, cap)
    out = None
    for out in iter_avoid(spec, int(a), int(n)):
        pass
    return out


@dataclass(frozen=True, eq=False)
class JointTable:
    """``entries[x - x_offset, ell] = P[S_n = x, Lambda^a_n = ell]``, ``ell = 0..n``."""

    n: int
    a: int
    x_offset: int
    entries: np.ndarray

    def prob(self, x: int, ell: int) -> float:
        i = x - self.x_offset
        if 0 <= i < self.entries.shape[0] and 0 <= ell < self.entries.shape[1]:
            return float(self.entries[i, ell])
        return 0.0

    def total(self) -> float:
        return float(self.entries.sum())

    def slice_ell(self, ell: int) -> Pmf:
        return Pmf(self.x_offset, self.entries[:, ell].copy())

    def marginal_x(self) -> Pmf:
        return Pmf(self.x_offset, self.entries.sum(axis=1))

    def marginal_ell(self) -> Pmf:
        return Pmf(0, self.entries.sum(axis=0))

    def cells(self) -> Iterator[tuple[int, int, float]]:
        for i, ell in zip(*np.nonzero(self.entries)):
            yield self.x_offset + int(i), int(ell), float(self.entries[i, ell])

    def to_csv(self, path: str | Path | None = None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["x", "ell", "probability"])
        for x, ell, p in self.cells():
            writer.writerow([x, ell, f"{p:.17g}"])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text


def _joint_sweep(spec: WalkSpec, a: int, n: int) -> tuple[int, np.ndarray]:
    probs = spec.step.as_array()
    width = len(probs)
    table = np.zeros((1, n + 1))
    table[0, 0] = 1.0
    offset = 0
    for _ in range(n):
        rows = table.shape[0]
        nxt = np.zeros((rows + width - 1, n + 1))
        for j, p in enumerate(probs):
            if p:
                nxt[j : j + rows] += p * table
        offset += spec.step.min_step
        i = a - offset
        if 0 <= i < nxt.shape[0]:
            nxt[i, 1:] = nxt[i, :-1].copy()
            nxt[i, 0] = 0.0
        table = nxt
    return offset, table


def joint_pmf(spec: WalkSpec, a: int, n: int, cap: int | None = None) -> JointTable:
    """Brute-force table of ``P[S_n = x, Lambda^a_n = ell]``."""
    _check_horizon(n)
    cap = JOINT_CAP if cap is None else cap
    if n > cap:
        raise ResourceError(f"joint table horizon {n} exceeds oracle cap {cap}")
    offset, table = _joint_sweep(spec, int(a), int(n))
    return JointTable(n=int(n), a=int(a), x_offset=offset, entries=table)


def occupation_pmf(spec: WalkSpec, a: int, n: int, cap: int | None = None) -> Pmf:
    """``ell -> P[Lambda^a_n = ell]`` for ``ell = 0..n``."""
    _check_horizon(n)
    cap = OCCUPATION_CAP if cap is None else cap
    if n > cap:
        raise ResourceError(f"occupation horizon {n} exceeds cap {cap}")
    _, table = _joint_sweep(spec, int(a), int(n))
    return Pmf(0, table.sum(axis=0))
