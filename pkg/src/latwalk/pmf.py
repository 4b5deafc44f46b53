"""Probability mass functions on integer intervals."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

import numpy as np


@dataclass(frozen=True, eq=False)
class Pmf:
    """Nonnegative weights ``values[i]`` at the integers ``offset + i``.

    Indexing with an integer outside the stored window returns 0, so a Pmf
    behaves like a function on all of Z.
    """

    offset: int
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1:
            raise ValueError("Pmf values must be one-dimensional")
        object.__setattr__(self, "offset", int(self.offset))
        object.__setattr__(self, "values", values)

    @classmethod
    def delta(cls, at: int = 0) -> "Pmf":
        return cls(at, np.ones(1))

    @classmethod
    def from_mapping(cls, masses: Mapping[int, float]) -> "Pmf":
        if not masses:
            return cls(0, np.zeros(0))
        lo, hi = min(masses), max(masses)
        values = np.zeros(hi - lo + 1)
        for k, p in masses.items():
            values[k - lo] = p
        return cls(lo, values)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, index: int) -> float:
        i = int(index) - self.offset
        if 0 <= i < len(self.values):
            return float(self.values[i])
        return 0.0

    @property
    def last(self) -> int:
        """Largest stored index (``offset - 1`` when empty)."""
        return self.offset + len(self.values) - 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + len(self.values))

    def total(self) -> float:
        return float(np.sum(self.values))

    def window(self, lo: int, hi: int) -> np.ndarray:
        """Dense copy of the values at ``lo..hi`` inclusive, zero-padded."""
        out = np.zeros(max(hi - lo + 1, 0))
        src_lo = max(lo, self.offset)
        src_hi = min(hi, self.last)
        if src_lo <= src_hi:
            out[src_lo - lo : src_hi - lo + 1] = self.values[src_lo - self.offset : src_hi - self.offset + 1]
        return out

    def restrict(self, lo: int, hi: int) -> "Pmf":
        return Pmf(lo, self.window(lo, hi))

    def trim(self) -> "Pmf":
        """Drop leading and trailing exact zeros."""
        nz = np.flatnonzero(self.values)
        if len(nz) == 0:
            return Pmf(self.offset, np.zeros(0))
        return Pmf(self.offset + int(nz[0]), self.values[nz[0] : nz[-1] + 1].copy())

    def to_dict(self) -> dict[int, float]:
        return {int(k): float(v) for k, v in zip(self.indices, self.values) if v != 0}

    def to_csv(self, path: str | Path | None = None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["index", "probability"])
        for k, v in zip(self.indices, self.values):
            writer.writerow([int(k), f"{v:.17g}"])
        text = buf.getvalue()
        if path is not None:
            Path(path).write_text(text)
        return text

    @classmethod
    def read_csv(cls, path: str | Path) -> "Pmf":
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        return cls.from_mapping({int(r["index"]): float(r["probability"]) for r in rows})

    def __repr__(self) -> str:
        return f"Pmf(offset={self.offset}, len={len(self)}, mass={self.total():.6g})"
