"""Exact permanent evaluation: brute force, Ryser, Glynn and its repeated-index
variants, the Glynn-Kan double sum, and the Cauchy-Binet composition rule.

Conventions: the permanent of a non-square matrix is 0, the permanent of the
empty (0 x 0) matrix is 1.  Formulas that require |p| = |q| = n return 0 with
a :class:`WeightMismatchWarning` when the weights differ, matching the fact
that the corresponding repeated matrix is rectangular.

The sign-vector sums (Ryser, Glynn, Glynn-Kan) run as pure-Python Gray-code
loops so exact (int / Fraction) inputs stay exact; the roots-of-unity grids
are vectorized with numpy and are numeric-only.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

import numpy as np

from .combinatorics import (
    RepetitionPattern,
    enumerate_weight,
    factorial_product,
    repeat_matrix,
    weight,
)
from .errors import DimensionMismatch, TooLarge, WeightMismatchWarning
from .numerics import ComplexMatrix, UnitaryMatrix

TERM_BUDGET = 10**7

NAIVE_MAX_DIM = 10
RYSER_MAX_DIM = 30
GLYNN_KAN_MAX_DIM = 14

Scalar = Union[complex, Fraction, int]


@dataclass(frozen=True)
class PermanentResult:
    value: Scalar
    algorithm: str
    term_count: int


def _coerce(a):
    """Normalize input to (rows, nrows, ncols, exact).

    ``rows`` is a tuple of row tuples with Python scalars; exact inputs keep
    int / Fraction entries, anything else becomes complex.
    """
    if isinstance(a, UnitaryMatrix):
        a = a.matrix.data
    if isinstance(a, ComplexMatrix):
        a = a.data
    if isinstance(a, np.ndarray):
        if a.ndim != 2:
            raise DimensionMismatch(f"expected a 2-d array, got shape {a.shape}")
        rows = tuple(tuple(complex(z) for z in row) for row in a.tolist())
        return rows, a.shape[0], a.shape[1], False
    rows = tuple(tuple(row) for row in a)
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    if any(len(r) != ncols for r in rows):
        raise DimensionMismatch("ragged rows")
    exact = all(isinstance(v, (int, Fraction)) for r in rows for v in r)
    if not exact:
        rows = tuple(tuple(complex(v) for v in r) for r in rows)
    return rows, nrows, ncols, exact


def _degenerate(nrows: int, ncols: int, algorithm: str) -> Optional[PermanentResult]:
    if nrows == 0 and ncols == 0:
        return PermanentResult(1, algorithm, 1)
    if nrows != ncols:
        return PermanentResult(0, algorithm, 0)
    return None


@lru_cache(maxsize=None)
def _perm_indices(m: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(m))), dtype=np.intp)


def _naive_numeric(rows, m: int) -> complex:
    arr = np.array(rows, dtype=np.complex128)
    perms = _perm_indices(m)
    prod = arr[0, perms[:, 0]].copy()
    for i in range(1, m):
        prod *= arr[i, perms[:, i]]
    return complex(prod.sum())


def permanent_naive(a) -> PermanentResult:
    """Sum over all m! permutations of products of entries."""
    rows, nrows, ncols, exact = _coerce(a)
    deg = _degenerate(nrows, ncols, "naive")
    if deg is not None:
        return deg
    m = nrows
    if m > NAIVE_MAX_DIM:
        raise TooLarge(f"naive permanent limited to dim <= {NAIVE_MAX_DIM}, got {m}")
    if exact:
        total = 0
        for perm in itertools.permutations(range(m)):
            term = 1
            for i, j in enumerate(perm):
                term *= rows[i][j]
            total += term
        value: Scalar = total
    else:
        value = _naive_numeric(rows, m)
    return PermanentResult(value, "naive", math.factorial(m))


def _columns(rows, m: int, ncols: int):
    return [tuple(rows[i][j] for i in range(m)) for j in range(ncols)]


def permanent_ryser(a) -> PermanentResult:
    """Inclusion-exclusion over column subsets with Gray-code row-sum updates."""
    rows, nrows, ncols, exact = _coerce(a)
    deg = _degenerate(nrows, ncols, "ryser")
    if deg is not None:
        return deg
    m = nrows
    if m > RYSER_MAX_DIM or (1 << m) > TERM_BUDGET:
        raise TooLarge(f"Ryser sum over 2^{m} subsets exceeds the budget")
    cols = _columns(rows, m, ncols)
    sums = [0] * m
    total = 0
    size = 0
    for k in range(1, 1 << m):
        j = (k & -k).bit_length() - 1
        col = cols[j]
        if ((k ^ (k >> 1)) >> j) & 1:
            size += 1
            for i in range(m):
                sums[i] += col[i]
        else:
            size -= 1
            for i in range(m):
                sums[i] -= col[i]
        term = 1
        for s in sums:
            term *= s
        total += term if size % 2 == 0 else -term
    value: Scalar = total if m % 2 == 0 else -total
    if not exact:
        value = complex(value)
    return PermanentResult(value, "ryser", (1 << m) - 1)


def permanent_glynn(a) -> PermanentResult:
    """Glynn's sign-vector formula with x_1 fixed to +1 (2^(m-1) terms)."""
    rows, nrows, ncols, exact = _coerce(a)
    deg = _degenerate(nrows, ncols, "glynn")
    if deg is not None:
        return deg
    m = nrows
    if m > RYSER_MAX_DIM or (1 << m) > TERM_BUDGET:
        raise TooLarge(f"Glynn sum over 2^{m - 1} sign vectors exceeds the budget")
    cols = _columns(rows, m, ncols)
    sums = [sum(row) for row in rows]
    xs = [1] * m
    sign = 1
    term = 1
    for s in sums:
        term *= s
    total = term
    for k in range(1, 1 << (m - 1)):
        j = (k & -k).bit_length()  # flip x_{j+1}; x_1 stays +1
        xs[j] = -xs[j]
        d = 2 * xs[j]
        col = cols[j]
        for i in range(m):
            sums[i] += d * col[i]
        sign = -sign
        term = 1
        for s in sums:
            term *= s
        total += sign * term
    denom = 1 << (m - 1)
    value: Scalar = Fraction(total, denom) if exact else complex(total) / denom
    return PermanentResult(value, "glynn", 1 << (m - 1))


def permanent_glynn_repeated_rows(a, q) -> PermanentResult:
    """Glynn-type sum for Per(A_{q,1}): row i enters with exponent q_i.

    The Kronecker delta in the formula makes the result 0 unless |q| equals
    the dimension of A.
    """
    rows, nrows, ncols, exact = _coerce(a)
    if nrows != ncols:
        raise DimensionMismatch("matrix must be square")
    n = nrows
    q = tuple(int(v) for v in q)
    if len(q) != n:
        raise DimensionMismatch("repetition vector length must equal the matrix dimension")
    if weight(q) != n:
        return PermanentResult(0, "glynn_repeated_rows", 0)
    if n > RYSER_MAX_DIM or (1 << n) > TERM_BUDGET:
        raise TooLarge(f"sum over 2^{n} sign vectors exceeds the budget")
    cols = _columns(rows, n, n)
    sums = [sum(row) for row in rows]
    xs = [1] * n
    sign = 1
    powered = [i for i in range(n) if q[i]]

    def product():
        term = 1
        for i in powered:
            term *= sums[i] ** q[i]
        return term

    total = product()
    for k in range(1, 1 << n):
        j = (k & -k).bit_length() - 1
        xs[j] = -xs[j]
        d = 2 * xs[j]
        col = cols[j]
        for i in range(n):
            sums[i] += d * col[i]
        sign = -sign
        total += sign * product()
    denom = 1 << n
    value: Scalar = Fraction(total, denom) if exact else complex(total) / denom
    return PermanentResult(value, "glynn_repeated_rows", 1 << n)


def _root_grid_digits(ids: np.ndarray, n: int, m: int) -> np.ndarray:
    digits = np.empty((ids.size, m), dtype=np.int64)
    rest = ids
    for j in range(m - 1, -1, -1):
        digits[:, j] = rest % n
        rest = rest // n
    return digits


def _as_complex_matrix_array(a) -> np.ndarray:
    if isinstance(a, UnitaryMatrix):
        return a.matrix.data
    if isinstance(a, ComplexMatrix):
        return a.data
    return np.asarray(a, dtype=np.complex128)


def permanent_roots_of_unity(a, pattern: RepetitionPattern, chunk: int = 1 << 15) -> PermanentResult:
    """Per(A_{p,q}) = (q!/n^m) * sum over x in mu_n^m of x^{-q} (Ax)^p, n = |p| = |q|."""
    arr = _as_complex_matrix_array(a)
    m = arr.shape[0]
    if arr.shape[1] != m or pattern.length != m:
        raise DimensionMismatch("pattern length must equal the square matrix dimension")
    p, q = pattern.rows, pattern.cols
    n = weight(p)
    if weight(q) != n:
        warnings.warn("|p| != |q|: permanent of a rectangular repetition is 0", WeightMismatchWarning)
        return PermanentResult(0j, "roots_of_unity", 0)
    if n == 0:
        return PermanentResult(1 + 0j, "roots_of_unity", 1)
    grid = n**m
    if grid > TERM_BUDGET:
        raise TooLarge(f"roots-of-unity grid n^m = {grid} exceeds the budget")
    roots = np.exp(2j * np.pi * np.arange(n) / n)
    p_idx = [(i, p[i]) for i in range(m) if p[i]]
    q_idx = [(j, q[j]) for j in range(m) if q[j]]
    total = 0j
    for lo in range(0, grid, chunk):
        ids = np.arange(lo, min(lo + chunk, grid), dtype=np.int64)
        x = roots[_root_grid_digits(ids, n, m)]
        w = x @ arr.T
        term = np.ones(ids.size, dtype=np.complex128)
        for i, pi in p_idx:
            term *= w[:, i] ** pi
        for j, qj in q_idx:
            term *= np.conj(x[:, j]) ** qj
        total += term.sum()
    value = complex(factorial_product(q) * total / grid)
    return PermanentResult(value, "roots_of_unity", grid)


def permanent_glynn_kan(a) -> PermanentResult:
    """Symmetrized double sign sum: (1/(4^m m!)) sum_{x,y} (prod x)(prod y)(x^T A y)^m."""
    rows, nrows, ncols, exact = _coerce(a)
    deg = _degenerate(nrows, ncols, "glynn_kan")
    if deg is not None:
        return deg
    m = nrows
    if m > GLYNN_KAN_MAX_DIM or 4**m > TERM_BUDGET:
        raise TooLarge(f"Glynn-Kan sum over 4^{m} sign pairs exceeds the budget")
    cols = _columns(rows, m, ncols)
    w = [sum(row) for row in rows]  # w_i = (A y)_i, y = all ones
    ys = [1] * m
    sign_y = 1
    total = 0
    for ky in range(1 << m):
        if ky:
            j = (ky & -ky).bit_length() - 1
            ys[j] = -ys[j]
            d = 2 * ys[j]
            col = cols[j]
            for i in range(m):
                w[i] += d * col[i]
            sign_y = -sign_y
        s = sum(w)
        sign_x = 1
        inner = s**m
        xs = [1] * m
        for kx in range(1, 1 << m):
            i = (kx & -kx).bit_length() - 1
            xs[i] = -xs[i]
            s += 2 * xs[i] * w[i]
            sign_x = -sign_x
            inner += sign_x * s**m
        total += sign_y * inner
    denom = 4**m * math.factorial(m)
    value: Scalar = Fraction(total, denom) if exact else complex(total) / denom
    return PermanentResult(value, "glynn_kan", 4**m)


def permanent_glynn_kan_repeated(a, pattern: RepetitionPattern, chunk: int = 256) -> PermanentResult:
    """Per(A_{p,q}) = p!q!/(n^{2m} n!) * sum over x,y in mu_n^m of x^{-p} y^{-q} (x^T A y)^n."""
    arr = _as_complex_matrix_array(a)
    m = arr.shape[0]
    if arr.shape[1] != m or pattern.length != m:
        raise DimensionMismatch("pattern length must equal the square matrix dimension")
    p, q = pattern.rows, pattern.cols
    n = weight(p)
    if weight(q) != n:
        warnings.warn("|p| != |q|: permanent of a rectangular repetition is 0", WeightMismatchWarning)
        return PermanentResult(0j, "glynn_kan_repeated", 0)
    if n == 0:
        return PermanentResult(1 + 0j, "glynn_kan_repeated", 1)
    if n ** (2 * m) > TERM_BUDGET:
        raise TooLarge(f"roots-of-unity grid n^(2m) = {n ** (2 * m)} exceeds the budget")
    grid = n**m
    roots = np.exp(2j * np.pi * np.arange(n) / n)
    pts = roots[_root_grid_digits(np.arange(grid, dtype=np.int64), n, m)]  # (grid, m)
    conj = np.conj(pts)
    wx = np.ones(grid, dtype=np.complex128)
    wy = np.ones(grid, dtype=np.complex128)
    for i in range(m):
        if p[i]:
            wx *= conj[:, i] ** p[i]
        if q[i]:
            wy *= conj[:, i] ** q[i]
    ayt = arr @ pts.T  # column g = A y_g
    total = 0j
    for lo in range(0, grid, chunk):
        hi = min(lo + chunk, grid)
        s = pts[lo:hi] @ ayt  # (chunk, grid): x_g . (A y_h)
        total += wx[lo:hi] @ (s**n) @ wy
    scalefac = float(Fraction(factorial_product(p) * factorial_product(q), grid * grid * math.factorial(n)))
    value = complex(total) * scalefac
    return PermanentResult(value, "glynn_kan_repeated", grid * grid)


def permanent_cauchy_binet(a, b, pattern: RepetitionPattern) -> PermanentResult:
    """Per((AB)_{p,q}) = sum over |k| = |p| of Per(A_{p,k}) Per(B_{k,q}) / k!."""
    rows_a, ra, ca, exact_a = _coerce(a)
    rows_b, rb, cb, exact_b = _coerce(b)
    if ra != ca or rb != cb or ra != rb:
        raise DimensionMismatch("Cauchy-Binet needs two square matrices of equal dimension")
    m = ra
    if pattern.length != m:
        raise DimensionMismatch("pattern length must equal the matrix dimension")
    p, q = pattern.rows, pattern.cols
    npq = weight(p)
    if weight(q) != npq:
        return PermanentResult(0, "cauchy_binet", 0)
    terms = math.comb(npq + m - 1, m - 1)
    if terms * (1 << min(npq, 60)) * max(npq, 1) > TERM_BUDGET:
        raise TooLarge("Cauchy-Binet inner-permanent budget exceeded")
    exact = exact_a and exact_b
    if not exact:
        rows_a = tuple(tuple(complex(v) for v in r) for r in rows_a)
        rows_b = tuple(tuple(complex(v) for v in r) for r in rows_b)
    total: Scalar = 0
    for k in enumerate_weight(m, npq):
        pa = permanent_ryser(repeat_matrix(rows_a, RepetitionPattern(p, k))).value
        pb = permanent_ryser(repeat_matrix(rows_b, RepetitionPattern(k, q))).value
        kfac = factorial_product(k)
        if exact:
            total += Fraction(pa * pb, kfac)
        else:
            total += pa * pb / kfac
    if not exact:
        total = complex(total)
    return PermanentResult(total, "cauchy_binet", terms)


ALGORITHMS = {
    "naive": permanent_naive,
    "ryser": permanent_ryser,
    "glynn": permanent_glynn,
    "glynn-repeated-rows": permanent_glynn_repeated_rows,
    "roots-of-unity": permanent_roots_of_unity,
    "glynn-kan": permanent_glynn_kan,
    "glynn-kan-repeated": permanent_glynn_kan_repeated,
    "cauchy-binet": permanent_cauchy_binet,
}
