"""Multi-index arithmetic, repetition patterns, and restricted enumerations.

A multi-index is a plain tuple of non-negative ints.  ``repeat_matrix``
builds A_{p,q}: row i repeated p_i times (deleted when p_i = 0), then
column j repeated q_j times.  The result may be rectangular or empty;
permanent routines map those to 0 and 1 respectively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

import numpy as np

from .errors import DimensionMismatch
from .numerics import ComplexMatrix, UnitaryMatrix, as_array

MultiIndex = tuple[int, ...]


def as_multi_index(p: Sequence[int]) -> MultiIndex:
    out = tuple(int(k) for k in p)
    if any(k < 0 for k in out):
        raise ValueError(f"multi-index components must be non-negative: {out}")
    return out


def weight(p: Sequence[int]) -> int:
    """|p| = p_1 + ... + p_m."""
    return sum(p)


def factorial_product(p: Sequence[int]) -> int:
    """p! = p_1! * ... * p_m!, exact big integer."""
    return math.prod(math.factorial(int(k)) for k in p)


@dataclass(frozen=True)
class RepetitionPattern:
    """Row/column repetition counts of equal length."""

    rows: MultiIndex
    cols: MultiIndex

    def __post_init__(self) -> None:
        object.__setattr__(self, "rows", as_multi_index(self.rows))
        object.__setattr__(self, "cols", as_multi_index(self.cols))
        if len(self.rows) != len(self.cols):
            raise DimensionMismatch(
                f"row pattern length {len(self.rows)} != column pattern length {len(self.cols)}"
            )

    @property
    def length(self) -> int:
        return len(self.rows)

    def square_compatible(self) -> bool:
        return weight(self.rows) == weight(self.cols)

    @classmethod
    def uniform(cls, m: int) -> "RepetitionPattern":
        ones = (1,) * m
        return cls(ones, ones)


def _is_exact_rows(a) -> bool:
    if isinstance(a, (np.ndarray, ComplexMatrix, UnitaryMatrix)):
        return False
    for row in a:
        for v in row:
            if not isinstance(v, (int, Fraction)):
                return False
    return True


def repeat_matrix(a, pattern: RepetitionPattern):
    """Return A_{p,q} with rows repeated first, then columns.

    Numeric input yields an ``np.ndarray`` of shape (|p|, |q|); exact input
    (int / Fraction entries) yields nested tuples so downstream arithmetic
    stays exact.
    """
    p, q = pattern.rows, pattern.cols
    if _is_exact_rows(a):
        rows = [tuple(row) for row in a]
        if len(rows) != len(p) or (rows and len(rows[0]) != len(q)):
            raise DimensionMismatch("pattern length must equal the matrix dimension")
        if weight(p) == 0 or weight(q) == 0:
            # nested tuples cannot carry a 0 x k shape; an entry-free numpy
            # array loses no exactness
            return np.zeros((weight(p), weight(q)))
        expanded_rows = []
        for i, reps in enumerate(p):
            expanded_rows.extend([rows[i]] * reps)
        out = []
        for row in expanded_rows:
            new_row = []
            for j, reps in enumerate(q):
                new_row.extend([row[j]] * reps)
            out.append(tuple(new_row))
        return tuple(out)
    arr = as_array(a)
    if arr.shape[0] != len(p) or arr.shape[1] != len(q):
        raise DimensionMismatch("pattern length must equal the matrix dimension")
    return np.repeat(np.repeat(arr, p, axis=0), q, axis=1)


def enumerate_weight(m: int, n: int) -> Iterator[MultiIndex]:
    """All p in N^m with |p| = n, in ascending lexicographic order."""
    if m < 1:
        raise ValueError("need m >= 1")
    if n < 0:
        raise ValueError("need n >= 0")
    if m == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in enumerate_weight(m - 1, n - first):
            yield (first,) + rest


def count_weight(m: int, n: int) -> int:
    """Number of p in N^m with |p| = n (stars and bars)."""
    return math.comb(n + m - 1, m - 1)


def enumerate_splits(
    p: Sequence[int],
    parts: int,
    part_weights: Optional[Sequence[int]] = None,
) -> Iterator[tuple[MultiIndex, ...]]:
    """Ordered tuples of multi-indices summing componentwise to p.

    ``parts`` must be 2 or 3.  When ``part_weights`` is given, only splits
    whose k-th part has weight part_weights[k] are yielded.
    """
    if parts not in (2, 3):
        raise ValueError("parts must be 2 or 3")
    p = as_multi_index(p)
    if part_weights is not None and len(part_weights) != parts:
        raise ValueError("part_weights must have one entry per part")

    def emit(split: tuple[MultiIndex, ...]) -> bool:
        if part_weights is None:
            return True
        return all(weight(s) == w for s, w in zip(split, part_weights))

    if parts == 2:
        for s in _sub_indices(p):
            split = (s, tuple(pi - si for pi, si in zip(p, s)))
            if emit(split):
                yield split
    else:
        for s in _sub_indices(p):
            remainder = tuple(pi - si for pi, si in zip(p, s))
            for t in _sub_indices(remainder):
                split = (s, t, tuple(ri - ti for ri, ti in zip(remainder, t)))
                if emit(split):
                    yield split


def _sub_indices(p: MultiIndex) -> Iterator[MultiIndex]:
    """All s with 0 <= s <= p componentwise, lexicographic."""
    if not p:
        yield ()
        return
    for first in range(p[0] + 1):
        for rest in _sub_indices(p[1:]):
            yield (first,) + rest
