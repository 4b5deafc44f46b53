"""Path sampling and empirical joint laws of (endpoint, visit count).

Randomness comes from :mod:`latwalk.philox`: trial ``t`` under seed ``s``
reads its own counter stream, so results do not depend on chunking or on
the number of workers.  Steps are drawn by inverse CDF over the finite
support using 32-bit uniforms.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.stats import binom

from .exact import JointTable
from .philox import uniforms
from .walk import WalkSpec

DEFAULT_CHUNK = 20_000


def _step_table(spec: WalkSpec) -> tuple[np.ndarray, np.ndarray]:
    cdf = np.cumsum(spec.step.as_array())
    cdf[-1] = 1.0
    values = np.arange(spec.step.min_step, spec.step.min_step + len(cdf))
    return cdf, values


def sample_paths(spec: WalkSpec, n: int, seed: int, trials: np.ndarray) -> np.ndarray:
    """Positions ``S_1..S_n`` for the given trial indices, shape ``(len(trials), n)``."""
    cdf, values = _step_table(spec)
    u = uniforms(seed, trials, n)
    steps = values[np.searchsorted(cdf, u, side="right")]
    return np.cumsum(steps, axis=1)


def sample_path(spec: WalkSpec, n: int, seed: int, levels: Sequence[int] = (0,), trial: int = 0):
    """Endpoint ``S_n`` and visit counts ``{level: Lambda^level_n}`` of one trial."""
    if n < 1:
        raise ValueError("n must be >= 1")
    path = sample_paths(spec, n, seed, np.array([trial]))[0]
    return int(path[-1]), {int(a): int(np.count_nonzero(path == a)) for a in levels}


@dataclass(frozen=True, eq=False)
class McEstimate:
    n: int
    a: int
    trials: int
    x_offset: int
    counts: np.ndarray  # counts[x - x_offset, ell]

    @property
    def table(self) -> np.ndarray:
        return self.counts / self.trials

    @property
    def std_err(self) -> np.ndarray:
        p = self.table
        return np.sqrt(p * (1.0 - p) / self.trials)

    def freq(self, x: int, ell: int) -> float:
        i = x - self.x_offset
        if 0 <= i < self.counts.shape[0] and 0 <= ell < self.counts.shape[1]:
            return self.counts[i, ell] / self.trials
        return 0.0

    def to_csv(self, path: str | Path | None = None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["x", "ell", "probability", "std_err"])
        p, se = self.table, self.std_err
        for i, ell in zip(*np.nonzero(self.counts)):
            writer.writerow([self.x_offset + int(i), int(ell), f"{p[i, ell]:.17g}", f"{se[i, ell]:.17g}"])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text


def _histogram(spec: WalkSpec, n: int, a: int, seed: int, lo: int, hi: int) -> np.ndarray:
    paths = sample_paths(spec, n, seed, np.arange(lo, hi, dtype=np.uint64))
    ends = paths[:, -1] - n * spec.step.min_step
    visits = np.count_nonzero(paths == a, axis=1)
    width = n * (len(spec.step.probs) - 1) + 1
    flat = np.bincount(ends * (n + 1) + visits, minlength=width * (n + 1))
    return flat.reshape(width, n + 1)


def estimate_joint(
    spec: WalkSpec,
    n: int,
    a: int,
    trials: int,
    seed: int,
    workers: int = 1,
    chunk: int = DEFAULT_CHUNK,
) -> McEstimate:
    """Empirical law of ``(S_n, Lambda^a_n)`` from ``trials`` independent paths."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    bounds = [(lo, min(lo + chunk, trials)) for lo in range(0, trials, chunk)]

    def work(b):
        return _histogram(spec, n, a, seed, *b)

    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(work, bounds))
    else:
        parts = [work(b) for b in bounds]
    counts = np.sum(parts, axis=0)
    return McEstimate(n=n, a=a, trials=trials, x_offset=n * spec.step.min_step, counts=counts)


def compare_to_oracle(est: McEstimate, oracle: JointTable, k: float, exact_tails: bool = False) -> tuple[int, int]:
    """Count cells whose frequency lies within ``k`` standard errors of the oracle.

    The standard error is that of a binomial frequency under the oracle
    probability, ``sqrt(p (1 - p) / trials)``, so cells the oracle gives tiny
    mass are judged fairly even when they were never sampled.  Cells with
    oracle probability 0 pass only if they were never sampled.  Returns
    ``(cells within, cells considered)`` over the union of both supports.

    With ``exact_tails`` a cell passes when its two-sided binomial tail
    probability is at least that of a normal deviate beyond ``k``.  This is
    the meaningful test for cells whose expected count is far below 1, where
    a single hit is many "standard errors" away.
    """
    if (est.n, est.a) != (oracle.n, oracle.a):
        raise ValueError("estimate and oracle describe different (n, a)")
    lo = min(est.x_offset, oracle.x_offset)
    hi = max(est.x_offset + est.counts.shape[0], oracle.x_offset + oracle.entries.shape[0])
    cols = est.n + 1
    p_hat = np.zeros((hi - lo, cols))
    p = np.zeros((hi - lo, cols))
    p_hat[est.x_offset - lo : est.x_offset - lo + est.counts.shape[0]] = est.table
    p[oracle.x_offset - lo : oracle.x_offset - lo + oracle.entries.shape[0]] = oracle.entries
    cells = (p > 0) | (p_hat > 0)
    if exact_tails:
        counts = np.rint(p_hat * est.trials)
        lower = binom.cdf(counts, est.trials, p)
        upper = binom.sf(counts - 1, est.trials, p)
        pval = np.minimum(1.0, 2.0 * np.minimum(lower, upper))
        within = np.where(p > 0, pval >= math.erfc(k / math.sqrt(2.0)), counts == 0)
    else:
        se = np.sqrt(p * (1.0 - p) / est.trials)
        within = np.abs(p_hat - p) <= k * se
    return int(np.count_nonzero(within & cells)), int(np.count_nonzero(cells))


def mean_endpoint(spec: WalkSpec, n: int, trials: int, seed: int) -> tuple[float, float]:
    """Sample mean of ``S_n / sqrt(n)`` and its CLT standard error."""
    total = 0.0
    for lo in range(0, trials, DEFAULT_CHUNK):
        hi = min(lo + DEFAULT_CHUNK, trials)
        ends = sample_paths(spec, n, seed, np.arange(lo, hi, dtype=np.uint64))[:, -1]
        total += float(ends.sum())
    return total / trials / math.sqrt(n), math.sqrt(spec.variance / trials)
