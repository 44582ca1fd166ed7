"""Fused draw-and-count loops for the hot estimation paths.

Each kernel regenerates the counter stream of rng.sample_assignments
inline and returns integer counts, so estimates are exact functions of
(seed, s) with no float accumulation and no sample buffer.  The numba
versions and the numpy fallbacks must produce identical counts; tests
assert this.
"""
from __future__ import annotations

import numpy as np

from .rng import sample_assignments

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - present in the supported environment
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        return wrap


_G = np.uint64(0x9E3779B97F4A7C15)
_C1 = np.uint64(0xBF58476D1CE4E5B9)
_C2 = np.uint64(0x94D049BB133111EB)


@njit(cache=True)
def _conj_conj_loop(seed, s, mask_r, mask_f, dim_mask):  # pragma: no cover - jit
    c = seed
    c_both = 0
    c_r = 0
    c_f = 0
    for _ in range(s):
        c = c + _G
        z = c
        z = (z ^ (z >> np.uint64(30))) * _C1
        z = (z ^ (z >> np.uint64(27))) * _C2
        z = z ^ (z >> np.uint64(31))
        x = z & dim_mask
        a = (x & mask_r) == mask_r
        b = (x & mask_f) == mask_f
        if a:
            c_r += 1
        if b:
            c_f += 1
        if a and b:
            c_both += 1
    return c_both, c_r, c_f


@njit(cache=True)
def _conj_parity_loop(seed, s, mask_c, mask_p, dim_mask):  # pragma: no cover - jit
    c = seed
    c_both = 0
    c_c = 0
    c_p = 0
    for _ in range(s):
        c = c + _G
        z = c
        z = (z ^ (z >> np.uint64(30))) * _C1
        z = (z ^ (z >> np.uint64(27))) * _C2
        z = z ^ (z >> np.uint64(31))
        x = z & dim_mask
        a = (x & mask_c) == mask_c
        v = x & mask_p
        v ^= v >> np.uint64(32)
        v ^= v >> np.uint64(16)
        v ^= v >> np.uint64(8)
        v ^= v >> np.uint64(4)
        v ^= v >> np.uint64(2)
        v ^= v >> np.uint64(1)
        b = (v & np.uint64(1)) == np.uint64(0)
        if a:
            c_c += 1
        if b:
            c_p += 1
        if a and b:
            c_both += 1
    return c_both, c_c, c_p


def _conj_conj_numpy(seed: int, s: int, mask_r: int, mask_f: int,
                     n: int) -> tuple[int, int, int]:
    xs = sample_assignments(seed, s, n)
    mr = np.uint64(mask_r)
    mf = np.uint64(mask_f)
    tr = (xs & mr) == mr
    tf = (xs & mf) == mf
    return (int(np.count_nonzero(tr & tf)),
            int(np.count_nonzero(tr)),
            int(np.count_nonzero(tf)))


def _conj_parity_numpy(seed: int, s: int, mask_c: int, mask_p: int,
                       n: int) -> tuple[int, int, int]:
    xs = sample_assignments(seed, s, n)
    mc = np.uint64(mask_c)
    mp = np.uint64(mask_p)
    tc = (xs & mc) == mc
    tp = np.bitwise_count(xs & mp) % 2 == 0
    return (int(np.count_nonzero(tc & tp)),
            int(np.count_nonzero(tc)),
            int(np.count_nonzero(tp)))


def counts_conj_conj(seed: int, s: int, mask_r: int, mask_f: int,
                     n: int) -> tuple[int, int, int]:
    """(both true, r true, f true) over s drawn points for two conjunctions."""
    if not HAVE_NUMBA:
        return _conj_conj_numpy(seed, s, mask_r, mask_f, n)
    out = _conj_conj_loop(np.uint64(seed), s, np.uint64(mask_r),
                          np.uint64(mask_f), np.uint64((1 << n) - 1))
    return int(out[0]), int(out[1]), int(out[2])


def counts_conj_parity(seed: int, s: int, mask_c: int, mask_p: int,
                       n: int) -> tuple[int, int, int]:
    """(conj true and parity even, conj true, parity even) over s points."""
    if not HAVE_NUMBA:
        return _conj_parity_numpy(seed, s, mask_c, mask_p, n)
    out = _conj_parity_loop(np.uint64(seed), s, np.uint64(mask_c),
                            np.uint64(mask_p), np.uint64((1 << n) - 1))
    return int(out[0]), int(out[1]), int(out[2])
