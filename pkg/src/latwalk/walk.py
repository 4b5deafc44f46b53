"""Step distributions of integer-valued random walks and their validation.

A walk is accepted only if its step law is a probability distribution on the
integers with mean zero, generates the whole lattice (no sublattice ``c + hZ``
with ``h > 1`` carries it) and is aperiodic.  Every accepted law is wrapped in
an immutable :class:`WalkSpec` so it can be shared freely and used as a cache
key by the exact engine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    MassError,
    MeanError,
    NegativeProbability,
    ParseError,
    PeriodicError,
    SublatticeError,
    WalkError,
)

MASS_TOL = 1e-12
MEAN_TOL = 1e-12


@dataclass(frozen=True)
class StepDistribution:
    """Law of a single step: ``probs[i] = P[X = min_step + i]``."""

    min_step: int
    probs: tuple[float, ...]

    @property
    def steps(self) -> range:
        return range(self.min_step, self.min_step + len(self.probs))

    def support(self) -> list[int]:
        return [s for s, p in zip(self.steps, self.probs) if p > 0]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.probs, dtype=float)

    def mean(self) -> float:
        return math.fsum(s * p for s, p in zip(self.steps, self.probs))

    def second_moment(self) -> float:
        return math.fsum(s * s * p for s, p in zip(self.steps, self.probs))


@dataclass(frozen=True)
class WalkSpec:
    step: StepDistribution
    variance: float
    max_step: int

    @property
    def nu(self) -> float:
        return self.variance

    @property
    def max_up(self) -> int:
        """Largest upward jump (0 if the walk never moves up)."""
        return max(max(self.step.support()), 0)

    @property
    def max_down(self) -> int:
        """Largest downward jump as a nonnegative integer."""
        return max(-min(self.step.support()), 0)

    def is_symmetric(self) -> bool:
        probs = self.step.probs
        top = self.step.min_step + len(probs) - 1
        return top == -self.step.min_step and probs == probs[::-1]

    def __str__(self) -> str:
        pairs = ", ".join(f"{s}: {p:g}" for s, p in zip(self.step.steps, self.step.probs) if p > 0)
        return f"WalkSpec({{{pairs}}}, nu={self.variance:g})"


def aperiodicity_horizon(max_step: int) -> int:
    """Probe horizon for the return-time gcd certificate."""
    return 2 * (max_step + 1) ** 2


def _return_times(step: StepDistribution, horizon: int) -> list[int]:
    probs = step.as_array()
    offset, dist = 0, np.ones(1)
    times = []
    for k in range(1, horizon + 1):
        dist = np.convolve(dist, probs)
        offset += step.min_step
        if offset <= 0 < offset + len(dist) and dist[-offset] > 0:
            times.append(k)
    return times


def validate_step_distribution(raw: Iterable[tuple[int, float]]) -> WalkSpec:
    """Check a list of ``(step, probability)`` pairs and build a WalkSpec.

    Checks run in a fixed order (negativity, mass, support size, mean,
    aperiodicity, lattice maximality) and the first violation is raised.
    """
    pairs = [(int(s), float(p)) for s, p in raw]
    if not pairs:
        raise WalkError("empty step distribution")
    steps = [s for s, _ in pairs]
    if len(set(steps)) != len(steps):
        raise WalkError(f"duplicate steps in {steps}")
    for s, p in pairs:
        if not math.isfinite(p):
            raise WalkError(f"non-finite probability {p!r} at step {s}")
        if p < 0:
            raise NegativeProbability(f"P[X={s}] = {p} < 0")
    total = math.fsum(p for _, p in pairs)
    if abs(total - 1.0) > MASS_TOL:
        raise MassError(f"probabilities sum to {total!r}, not 1")

    lo, hi = min(steps), max(steps)
    probs = [0.0] * (hi - lo + 1)
    for s, p in pairs:
        probs[s - lo] = p
    # trim zero-probability padding so min_step is the true minimum
    while probs and probs[0] == 0.0:
        probs.pop(0)
        lo += 1
    while probs and probs[-1] == 0.0:
        probs.pop()
    step = StepDistribution(lo, tuple(probs))

    support = step.support()
    if len(support) < 2:
        raise WalkError(f"degenerate step law supported on {support}")
    mean = step.mean()
    if abs(mean) > MEAN_TOL:
        raise MeanError(f"mean step {mean!r} is not 0")

    max_step = max(abs(s) for s in support)
    times = _return_times(step, aperiodicity_horizon(max_step))
    period = reduce(math.gcd, times, 0)
    if period != 1:
        raise PeriodicError(
            f"returns to 0 within {aperiodicity_horizon(max_step)} steps only at "
            f"multiples of {period}"
        )
    h = reduce(math.gcd, (s - support[0] for s in support[1:]), 0)
    if h != 1:
        raise SublatticeError(f"support {support} lies on a lattice of span {h}")

    return WalkSpec(step=step, variance=step.second_moment(), max_step=max_step)


def variance(spec: WalkSpec) -> float:
    return spec.variance


def parse_walk(text: str) -> WalkSpec:
    """Parse ``step=probability`` lines; ``#`` starts a comment."""
    pairs = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            s, p = line.split("=")
            pairs.append((int(s.strip()), float(p.strip())))
        except ValueError as exc:
            raise ParseError(f"line {lineno}: expected 'step=probability', got {line!r}") from exc
    return validate_step_distribution(pairs)


BUILTIN_WALKS: dict[str, Sequence[tuple[int, float]]] = {
    "w3": [(-1, 1 / 3), (0, 1 / 3), (1, 1 / 3)],
    "lazy": [(-1, 0.25), (0, 0.5), (1, 0.25)],
    "five": [(-2, 0.125), (-1, 0.25), (0, 0.25), (1, 0.25), (2, 0.125)],
}


def load_walk(source: str | Path) -> WalkSpec:
    """Load a walk from a file, or from ``builtin:NAME`` for a bundled law."""
    source = str(source)
    if source.startswith("builtin:"):
        name = source.split(":", 1)[1]
        if name not in BUILTIN_WALKS:
            raise ParseError(f"unknown builtin walk {name!r}; choose from {sorted(BUILTIN_WALKS)}")
        return validate_step_distribution(BUILTIN_WALKS[name])
    return parse_walk(Path(source).read_text())


def w3() -> WalkSpec:
    return validate_step_distribution(BUILTIN_WALKS["w3"])


def lazy() -> WalkSpec:
    return validate_step_distribution(BUILTIN_WALKS["lazy"])
