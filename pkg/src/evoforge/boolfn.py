"""Boolean functions on the n-cube and exact correlation oracles.

Functions are monotone conjunctions (AND of unnegated variables,
identified with their variable sets), monotone DNFs (OR of such
conjunctions), and parities.  Variables are 1-based; a point of {0,1}^n
is bit-packed with bit i-1 holding the value of x_i.  Correlations are
expectations of output products under the uniform distribution, computed
exactly as rationals with denominator 2^n.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable

import numpy as np

from .errors import (DimensionMismatchError, EnumerationBudgetError,
                     ParameterError)

# Full enumeration above this dimension is refused, not attempted.
ENUM_MAX_N = 24


class OutputConvention(Enum):
    """Output range for {true, false}: SIGNED is {+1,-1}, BINARY is {1,0}."""

    SIGNED = "signed"
    BINARY = "binary"


@dataclass(frozen=True)
class Assignment:
    """One point of {0,1}^n. Bit i-1 of `bits` is the value of x_i."""

    n: int
    bits: int

    def __post_init__(self):
        if self.n < 1:
            raise ParameterError(f"dimension must be positive, got {self.n}")
        if not 0 <= self.bits < (1 << self.n):
            raise ParameterError(f"bits {self.bits:#x} outside {{0,1}}^{self.n}")

    def value(self, var: int) -> int:
        """Value of x_var (1-based)."""
        if not 1 <= var <= self.n:
            raise DimensionMismatchError(f"x{var} outside dimension {self.n}")
        return (self.bits >> (var - 1)) & 1

    @classmethod
    def from_string(cls, text: str) -> "Assignment":
        """Parse "110" as x1=1, x2=1, x3=0 (leftmost character is x1)."""
        if not text or any(ch not in "01" for ch in text):
            raise ParameterError(f"not a 0/1 string: {text!r}")
        bits = sum(1 << i for i, ch in enumerate(text) if ch == "1")
        return cls(n=len(text), bits=bits)

    def __str__(self) -> str:
        return "".join(str((self.bits >> i) & 1) for i in range(self.n))


def _check_literals(literals: Iterable[int]) -> frozenset[int]:
    out = frozenset(literals)
    for v in out:
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            raise ParameterError(f"variable indices must be positive ints, got {v!r}")
    return out


@dataclass(frozen=True)
class MonotoneConjunction:
    """AND of unnegated variables; empty set is the constant-true function."""

    literals: frozenset[int]

    def __init__(self, literals: Iterable[int] = ()):
        object.__setattr__(self, "literals", _check_literals(literals))

    @property
    def size(self) -> int:
        return len(self.literals)

    @property
    def max_literal(self) -> int:
        return max(self.literals, default=0)

    @cached_property
    def mask(self) -> int:
        return sum(1 << (v - 1) for v in self.literals)

    def truth(self, x: Assignment) -> bool:
        if self.max_literal > x.n:
            raise DimensionMismatchError(
                f"conjunction uses x{self.max_literal} but point has n={x.n}")
        return (x.bits & self.mask) == self.mask

    def truth_batch(self, xs: np.ndarray) -> np.ndarray:
        """Truth values over an array of packed points."""
        m = xs.dtype.type(self.mask)
        return (xs & m) == m

    def canonical(self) -> str:
        """Literal-sorted text form, "true" for the empty conjunction."""
        if not self.literals:
            return "true"
        return "&".join(f"x{v}" for v in sorted(self.literals))

    def __str__(self) -> str:
        return self.canonical()


@dataclass(frozen=True)
class MonotoneDnf:
    """OR of monotone conjunctions. Clause order is meaningful, duplicates legal."""

    clauses: tuple[MonotoneConjunction, ...]

    def __init__(self, clauses: Iterable[MonotoneConjunction]):
        cl = tuple(clauses)
        if not cl:
            raise ParameterError("a DNF needs at least one clause")
        if not all(isinstance(c, MonotoneConjunction) for c in cl):
            raise TypeError("clauses must be MonotoneConjunction instances")
        object.__setattr__(self, "clauses", cl)

    @property
    def k(self) -> int:
        return len(self.clauses)

    @property
    def max_literal(self) -> int:
        return max(c.max_literal for c in self.clauses)

    def truth(self, x: Assignment) -> bool:
        return any(c.truth(x) for c in self.clauses)

    def truth_batch(self, xs: np.ndarray) -> np.ndarray:
        out = self.clauses[0].truth_batch(xs)
        for c in self.clauses[1:]:
            out |= c.truth_batch(xs)
        return out

    def canonical(self) -> str:
        return " | ".join(c.canonical() for c in self.clauses)

    def __str__(self) -> str:
        return self.canonical()


@dataclass(frozen=True)
class ParityFunction:
    """(-1) raised to the sum of a fixed nonempty variable subset; always SIGNED."""

    literals: frozenset[int]

    def __init__(self, literals: Iterable[int]):
        lits = _check_literals(literals)
        if not lits:
            raise ParameterError("parity needs at least one variable")
        object.__setattr__(self, "literals", lits)

    @property
    def size(self) -> int:
        return len(self.literals)

    @property
    def max_literal(self) -> int:
        return max(self.literals)

    @cached_property
    def mask(self) -> int:
        return sum(1 << (v - 1) for v in self.literals)

    def truth(self, x: Assignment) -> bool:
        """True on even overlap, matching output +1."""
        if self.max_literal > x.n:
            raise DimensionMismatchError(
                f"parity uses x{self.max_literal} but point has n={x.n}")
        return bin(x.bits & self.mask).count("1") % 2 == 0

    def truth_batch(self, xs: np.ndarray) -> np.ndarray:
        m = xs.dtype.type(self.mask)
        return np.bitwise_count(xs & m) % 2 == 0

    def canonical(self) -> str:
        return "parity(" + ",".join(f"x{v}" for v in sorted(self.literals)) + ")"

    def __str__(self) -> str:
        return self.canonical()


def _to_output(true_value: bool, convention: OutputConvention) -> int:
    if convention is OutputConvention.SIGNED:
        return 1 if true_value else -1
    return 1 if true_value else 0


def eval_conjunction(c: MonotoneConjunction, x: Assignment,
                     convention: OutputConvention = OutputConvention.SIGNED) -> int:
    """Evaluate one conjunction at one point under the given convention."""
    return _to_output(c.truth(x), convention)


def eval_dnf(d: MonotoneDnf, x: Assignment,
             convention: OutputConvention = OutputConvention.SIGNED) -> int:
    """Evaluate a DNF at one point: OR of its clauses."""
    return _to_output(d.truth(x), convention)


def eval_parity(p: ParityFunction, x: Assignment) -> int:
    """Evaluate a parity at one point; the range is always {+1,-1}."""
    return 1 if p.truth(x) else -1


def truth_table(fn, n: int) -> np.ndarray:
    """Boolean truth array of `fn` over all 2^n points, index = packed bits.

    Accepts anything with a vectorized `truth_batch`, falling back to a
    per-point `truth` loop for plain objects.
    """
    if n > ENUM_MAX_N:
        raise EnumerationBudgetError(
            f"n={n} exceeds the enumeration limit {ENUM_MAX_N}; "
            "use empirical estimation instead")
    xs = np.arange(1 << n, dtype=np.uint32)
    if hasattr(fn, "truth_batch"):
        return np.asarray(fn.truth_batch(xs), dtype=bool)
    return np.fromiter(
        (bool(fn.truth(Assignment(n, int(b)))) for b in xs), dtype=bool,
        count=1 << n)


def _check_dim(fn, n: int) -> None:
    top = getattr(fn, "max_literal", 0)
    if top > n:
        raise DimensionMismatchError(f"function uses x{top} but n={n}")


def exact_perf(r, f, n: int,
               convention: OutputConvention = OutputConvention.SIGNED) -> Fraction:
    """Exact expected output product of r and f on uniform {0,1}^n.

    Returns the exact rational (denominator 2^n).  Only the three counts
    |r|, |f|, |r AND f| matter:

        SIGNED:  (4*c_both - 2*c_r - 2*c_f + 2^n) / 2^n
        BINARY:  c_both / 2^n

    Raises EnumerationBudgetError above n=24 and DimensionMismatchError if
    either function mentions a variable beyond n.
    """
    if n < 1:
        raise DimensionMismatchError(f"dimension must be positive, got {n}")
    _check_dim(r, n)
    _check_dim(f, n)
    tr = truth_table(r, n)
    tf = truth_table(f, n)
    c_r = int(np.count_nonzero(tr))
    c_f = int(np.count_nonzero(tf))
    c_both = int(np.count_nonzero(tr & tf))
    total = 1 << n
    if convention is OutputConvention.SIGNED:
        return Fraction(4 * c_both - 2 * c_r - 2 * c_f + total, total)
    return Fraction(c_both, total)


def conj_perf_closed_form(a: MonotoneConjunction, b: MonotoneConjunction,
                          convention: OutputConvention = OutputConvention.SIGNED,
                          ) -> Fraction:
    """Correlation of two monotone conjunctions without enumeration.

    For nonempty A, B under SIGNED:

        1 - 2^(1-|A|) - 2^(1-|B|) + 2^(2-|A union B|)

    Empty conjunctions are the constant-true function: two empties give 1,
    one empty against size m gives 2^(1-m) - 1.  BINARY is the probability
    both are true, 2^(-|A union B|).  Independent of the ambient dimension.
    """
    union = len(a.literals | b.literals)
    if convention is OutputConvention.BINARY:
        return Fraction(1, 1 << union)
    if not a.literals and not b.literals:
        return Fraction(1)
    if not a.literals:
        return Fraction(2, 1 << b.size) - 1
    if not b.literals:
        return Fraction(2, 1 << a.size) - 1
    return (Fraction(1)
            - Fraction(2, 1 << a.size)
            - Fraction(2, 1 << b.size)
            + Fraction(4, 1 << union))
