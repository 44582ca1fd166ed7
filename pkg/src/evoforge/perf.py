"""Performance measurement: Monte-Carlo estimates, per-term matrices, aggregates.

The performance of a hypothesis r against a target f is the expected
output product under the uniform distribution.  This module supplies the
sampled estimator, the clause-by-clause performance matrix of two DNFs,
and the scalar aggregators over that matrix.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np

from . import _kernels
from .boolfn import (MonotoneConjunction, MonotoneDnf, OutputConvention,
                     ParityFunction, conj_perf_closed_form)
from .errors import DimensionMismatchError, KMismatchError, ParameterError
from .rng import derive_seed, sample_assignments

MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SampleSpec:
    """Size and seed of one Monte-Carlo estimate."""

    s: int
    seed: int

    def __post_init__(self):
        if self.s < 1:
            raise ParameterError(f"sample count must be >= 1, got {self.s}")
        if not 0 <= self.seed <= MASK64:
            raise ParameterError("seed must fit in 64 bits")


class Aggregator(Enum):
    """Scalar summaries of the per-term performance matrix.

    MIN is the structural score (every clause pairing must be good), MAX
    the functional one (some pairing is good).  MATCHED_MIN relaxes MIN by
    letting hypothesis clauses be reassigned: the best over permutations
    of the worst matched pair.
    """

    MIN = "min"
    MAX = "max"
    MEAN = "mean"
    MEDIAN = "median"
    MATCHED_MIN = "matched_min"


@dataclass(frozen=True)
class PerfMatrix:
    """k x k performances: entries[i][j] is hypothesis clause j against target clause i."""

    entries: tuple[tuple[Fraction | float, ...], ...]
    convention: OutputConvention

    def __post_init__(self):
        k = len(self.entries)
        if k < 1 or any(len(row) != k for row in self.entries):
            raise ParameterError("matrix must be square and nonempty")
        lo = -1 if self.convention is OutputConvention.SIGNED else 0
        for row in self.entries:
            for v in row:
                if not lo <= v <= 1:
                    raise ParameterError(
                        f"entry {v} outside [{lo}, 1] for {self.convention.value}")

    @property
    def k(self) -> int:
        return len(self.entries)

    def flat(self) -> list:
        return [v for row in self.entries for v in row]


def _truth_counts_generic(r, f, n: int, s: int, seed: int) -> tuple[int, int, int]:
    xs = sample_assignments(seed, s, n)
    tr = r.truth_batch(xs) if hasattr(r, "truth_batch") else _truth_loop(r, xs, n)
    tf = f.truth_batch(xs) if hasattr(f, "truth_batch") else _truth_loop(f, xs, n)
    return (int(np.count_nonzero(tr & tf)),
            int(np.count_nonzero(tr)),
            int(np.count_nonzero(tf)))


def _truth_loop(fn, xs: np.ndarray, n: int) -> np.ndarray:
    from .boolfn import Assignment
    return np.fromiter((bool(fn.truth(Assignment(n, int(b)))) for b in xs),
                       dtype=bool, count=len(xs))


def _sample_counts(r, f, n: int, s: int, seed: int) -> tuple[int, int, int]:
    # Fused kernels cover the pairs the evolution loop actually estimates.
    if isinstance(r, MonotoneConjunction) and isinstance(f, MonotoneConjunction):
        return _kernels.counts_conj_conj(seed, s, r.mask, f.mask, n)
    if isinstance(r, MonotoneConjunction) and isinstance(f, ParityFunction):
        return _kernels.counts_conj_parity(seed, s, r.mask, f.mask, n)
    if isinstance(r, ParityFunction) and isinstance(f, MonotoneConjunction):
        cb, cf, cr = _kernels.counts_conj_parity(seed, s, f.mask, r.mask, n)
        return cb, cr, cf
    return _truth_counts_generic(r, f, n, s, seed)


def empirical_perf(r, f, n: int, spec: SampleSpec,
                   convention: OutputConvention = OutputConvention.SIGNED) -> float:
    """s-sample estimate of the expected output product of r and f.

    Points are drawn i.i.d. uniform from {0,1}^n by the counter generator
    seeded from spec.seed, so identical inputs give identical outputs.
    The estimate is assembled from integer counts, making it an exact
    multiple of 1/s.
    """
    for fn in (r, f):
        top = getattr(fn, "max_literal", 0)
        if top > n:
            raise DimensionMismatchError(f"function uses x{top} but n={n}")
    c_both, c_r, c_f = _sample_counts(r, f, n, spec.s, spec.seed)
    if convention is OutputConvention.SIGNED:
        return (4 * c_both - 2 * c_r - 2 * c_f + spec.s) / spec.s
    return c_both / spec.s


def term_perf_matrix(r: MonotoneDnf, f: MonotoneDnf, n: int,
                     mode: str | SampleSpec = "exact",
                     convention: OutputConvention = OutputConvention.SIGNED,
                     ) -> PerfMatrix:
    """Clause-by-clause performance matrix of hypothesis r against target f.

    mode "exact" uses the closed form (entries are Fractions); a SampleSpec
    estimates each entry from its own derived seed, so entry (i, j) is
    reproducible in isolation.
    """
    if r.k != f.k:
        raise KMismatchError(f"clause counts differ: {r.k} vs {f.k}")
    top = max(r.max_literal, f.max_literal)
    if top > n:
        raise DimensionMismatchError(f"clauses use x{top} but n={n}")
    rows = []
    for i, fi in enumerate(f.clauses):
        row = []
        for j, rj in enumerate(r.clauses):
            if mode == "exact":
                row.append(conj_perf_closed_form(rj, fi, convention))
            elif isinstance(mode, SampleSpec):
                row.append(empirical_perf(
                    rj, fi, n, SampleSpec(mode.s, derive_seed(mode.seed, i, j)),
                    convention))
            else:
                raise ParameterError(f"unknown matrix mode {mode!r}")
        rows.append(tuple(row))
    return PerfMatrix(entries=tuple(rows), convention=convention)


def _has_row_matching(entries, k: int, threshold) -> bool:
    match_of_col = [-1] * k

    def try_assign(i: int, seen: list[bool]) -> bool:
        for j in range(k):
            if entries[i][j] >= threshold and not seen[j]:
                seen[j] = True
                if match_of_col[j] < 0 or try_assign(match_of_col[j], seen):
                    match_of_col[j] = i
                    return True
        return False

    return all(try_assign(i, [False] * k) for i in range(k))


def matched_min(matrix: PerfMatrix):
    """Best over clause permutations of the worst matched entry.

    Solved as a bottleneck assignment: binary-search the entry values for
    the largest threshold still admitting a perfect row-column matching.
    """
    k = matrix.k
    values = sorted(set(matrix.flat()))
    lo, hi = 0, len(values) - 1
    best = values[0]  # a matching always exists at the global minimum
    while lo <= hi:
        mid = (lo + hi) // 2
        if _has_row_matching(matrix.entries, k, values[mid]):
            best = values[mid]
            lo = mid + 1
        else:
            hi = mid - 1
    return best


def gen_perf(matrix: PerfMatrix, aggregator: Aggregator):
    """Aggregate the k^2 matrix entries to one scalar.

    MEDIAN takes the lower median for even counts.  Exact (Fraction)
    matrices yield exact aggregates.
    """
    flat = matrix.flat()
    if aggregator is Aggregator.MIN:
        return min(flat)
    if aggregator is Aggregator.MAX:
        return max(flat)
    if aggregator is Aggregator.MEAN:
        return sum(flat) / len(flat)
    if aggregator is Aggregator.MEDIAN:
        return sorted(flat)[(len(flat) - 1) // 2]
    if aggregator is Aggregator.MATCHED_MIN:
        return matched_min(matrix)
    raise ParameterError(f"unknown aggregator {aggregator!r}")


def global_success(perf_value, epsilon: float) -> bool:
    """Strict success predicate: performance exceeds 1 - epsilon."""
    if not 0 < epsilon < 1:
        raise ParameterError(f"epsilon must be in (0,1), got {epsilon}")
    return perf_value > 1 - epsilon
