"""Deterministic counter-based randomness.

Every stochastic quantity in the package is a pure function of a 64-bit
seed.  Streams are split by hashing (seed, index) rather than by drawing,
so any evaluation can be reproduced in isolation: sample i of stream
(seed, j) never depends on how many other draws happened elsewhere.
"""
from __future__ import annotations

import numpy as np

from .errors import ParameterError

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
SEED_OFFSET = 0x6A09E667F3BCC909


def mix64(z: int) -> int:
    """Finalizing 64-bit avalanche (splitmix64 style)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *parts: int) -> int:
    """Split a child seed off `seed`, one avalanche round per part.

    Used for per-generation, per-neighbor, per-trial and per-matrix-entry
    streams; children of distinct part tuples are statistically independent.
    """
    h = (seed ^ SEED_OFFSET) & MASK64
    for p in parts:
        h = mix64((h + GAMMA + (p & MASK64)) & MASK64)
    return h


def uniform_unit(seed: int) -> float:
    """One float in [0, 1) determined entirely by `seed`."""
    return mix64(seed ^ 0x2545F4914F6CDD1D) / 2.0 ** 64


def sample_assignments(seed: int, count: int, n: int) -> np.ndarray:
    """`count` i.i.d. uniform points of {0,1}^n, packed into uint64.

    Sample i is mix64(seed + (i+1)*GAMMA) masked to the low n bits: a pure
    counter scheme, so the whole batch vectorizes and any prefix is stable
    under a larger `count`.
    """
    if not 1 <= n <= 63:
        raise ParameterError(f"n={n} outside supported sampling range 1..63")
    idx = np.arange(1, count + 1, dtype=np.uint64)
    z = np.uint64(seed & MASK64) + idx * np.uint64(GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    z ^= z >> np.uint64(31)
    return z & np.uint64((1 << n) - 1)


def weighted_choice(indices: list[int], weights: list[float], seed: int) -> int:
    """Pick one of `indices` with probability proportional to `weights`."""
    total = sum(weights)
    u = uniform_unit(seed) * total
    acc = 0.0
    for i, w in zip(indices, weights):
        acc += w
        if u < acc:
            return i
    return indices[-1]  # guard against accumulated rounding
