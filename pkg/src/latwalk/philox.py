"""Vectorized Philox4x32-10 counter-based generator.

Every output block is a pure function of a 128-bit counter and a 64-bit key,
so any draw can be recomputed in isolation.  Trial ``t`` of a simulation with
seed ``s`` uses key ``s`` and counters ``(block, t_lo, t_hi, 0)``; distinct
trials therefore never share a counter.
"""

from __future__ import annotations

import numpy as np

MASK32 = np.uint64(0xFFFFFFFF)
_M0 = np.uint64(0xD2511F53)
_M1 = np.uint64(0xCD9E8D57)
_W0 = 0x9E3779B9
_W1 = 0xBB67AE85
ROUNDS = 10


def philox4x32(counter, key) -> np.ndarray:
    """Apply Philox4x32-10.

    ``counter`` has shape ``(..., 4)`` and ``key`` shape ``(2,)``; all entries
    are 32-bit unsigned values.  Returns an array of shape ``(..., 4)`` of
    uint32 words.
    """
    c = np.asarray(counter, dtype=np.uint64)
    c0, c1, c2, c3 = (c[..., i] for i in range(4))
    k0, k1 = int(key[0]) & 0xFFFFFFFF, int(key[1]) & 0xFFFFFFFF
    for r in range(ROUNDS):
        if r:
            k0 = (k0 + _W0) & 0xFFFFFFFF
            k1 = (k1 + _W1) & 0xFFFFFFFF
        p0 = _M0 * c0
        p1 = _M1 * c2
        c0, c1, c2, c3 = (
            (p1 >> np.uint64(32)) ^ c1 ^ np.uint64(k0),
            p1 & MASK32,
            (p0 >> np.uint64(32)) ^ c3 ^ np.uint64(k1),
            p0 & MASK32,
        )
    return np.stack([c0, c1, c2, c3], axis=-1).astype(np.uint32)


def seed_key(seed: int) -> tuple[int, int]:
    seed = int(seed)
    if seed < 0 or seed >= 1 << 64:
        raise ValueError(f"seed must fit in 64 unsigned bits, got {seed}")
    return seed & 0xFFFFFFFF, seed >> 32


def uniforms(seed: int, trials: np.ndarray, count: int) -> np.ndarray:
    """``count`` uniforms in (0, 1) for each trial index; shape ``(len(trials), count)``.

    Draw ``j`` of trial ``t`` is word ``j % 4`` of block ``j // 4``.
    """
    trials = np.asarray(trials, dtype=np.uint64)
    blocks = -(-count // 4)
    ctr = np.zeros((len(trials), blocks, 4), dtype=np.uint64)
    ctr[..., 0] = np.arange(blocks, dtype=np.uint64)[None, :]
    ctr[..., 1] = (trials & MASK32)[:, None]
    ctr[..., 2] = (trials >> np.uint64(32))[:, None]
    words = philox4x32(ctr, seed_key(seed)).reshape(len(trials), blocks * 4)[:, :count]
    return (words.astype(np.float64) + 0.5) * 2.0**-32
