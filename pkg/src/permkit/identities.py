"""Executable verification of permanent identities.

Every verifier computes both sides of an identity independently — the
permanent side always from the brute-force oracle (`permanent_naive`), the
closed-form side from determinants / truncated series — and reports the
maximum coefficient discrepancy.  Exact-ring checks report a literal 0.0
error on success.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

import numpy as np

from . import rng
from .combinatorics import (
    RepetitionPattern,
    count_weight,
    enumerate_splits,
    enumerate_weight,
    factorial_product,
    repeat_matrix,
    weight,
)
from .errors import OddDimension, AmplitudeOutOfRange, TooLarge, WeightMismatch
from .numerics import ComplexMatrix, UnitaryMatrix, as_array, scaled_error
from .permanents import TERM_BUDGET, permanent_naive, permanent_ryser
from .series import (
    COMPLEX,
    RATIONAL,
    TruncatedSeries,
    det_series,
    series_mat_mul,
)

#: Matrix whose doubly-repeated permanents encode Dixon's alternating
#: binomial-cube sum.
DIXON_MATRIX = ((0, 1, -1), (-1, 0, 1), (1, -1, 0))

# Brute-force oracle guard: above this repeated weight the exact verifiers
# fall back to the monomial-coefficient route (still independent of the
# determinant side under test).
NAIVE_ORACLE_WEIGHT = 7


@dataclass(frozen=True)
class IdentityReport:
    identity_name: str
    max_abs_error: float
    num_coefficients_checked: int
    caps_used: tuple[int, ...]
    passed: bool
    tolerance: float
    ring: str = COMPLEX
    tail_bound: Optional[float] = None

    def to_json_dict(self) -> dict:
        out = {
            "identity_name": self.identity_name,
            "max_abs_error": self.max_abs_error,
            "num_coefficients_checked": self.num_coefficients_checked,
            "caps_used": list(self.caps_used),
            "passed": self.passed,
            "tolerance": self.tolerance,
            "ring": self.ring,
        }
        if self.tail_bound is not None:
            out["tail_bound"] = self.tail_bound
        return out


class _Tracker:
    def __init__(self) -> None:
        self.max_err = 0.0
        self.count = 0

    def add(self, value, reference) -> None:
        self.count += 1
        if value == reference:
            return
        self.max_err = max(self.max_err, scaled_error(complex(value), complex(reference)))

    def report(self, name, caps, tolerance, ring, tail_bound=None) -> IdentityReport:
        return IdentityReport(
            identity_name=name,
            max_abs_error=self.max_err,
            num_coefficients_checked=self.count,
            caps_used=tuple(caps),
            passed=self.max_err <= tolerance,
            tolerance=tolerance,
            ring=ring,
            tail_bound=tail_bound,
        )


def _normalize(a):
    """-> (matrix object, ring). Exact nested int/Fraction input stays exact."""
    if isinstance(a, (np.ndarray, ComplexMatrix, UnitaryMatrix)):
        return as_array(a), COMPLEX
    rows = tuple(tuple(r) for r in a)
    if all(isinstance(v, (int, Fraction)) for r in rows for v in r):
        return rows, RATIONAL
    return np.array(rows, dtype=np.complex128), COMPLEX


def _dim(mat) -> int:
    return mat.shape[0] if isinstance(mat, np.ndarray) else len(mat)


def _entry(mat, i: int, j: int, ring: str):
    v = mat[i][j] if not isinstance(mat, np.ndarray) else mat[i, j]
    return Fraction(v) if ring == RATIONAL else complex(v)


def _transpose(mat):
    if isinstance(mat, np.ndarray):
        return mat.T
    return tuple(tuple(row) for row in zip(*mat))


def _per(mat, p, q):
    """Brute-force Per(A_{p,q}); exact 0 for non-square repetitions."""
    if weight(p) != weight(q):
        return 0
    return permanent_naive(repeat_matrix(mat, RepetitionPattern(p, q))).value


def _caps(cap: Union[int, Sequence[int]], nvars: int) -> tuple[int, ...]:
    if isinstance(cap, int):
        return (cap,) * nvars
    caps = tuple(int(c) for c in cap)
    if len(caps) != nvars:
        raise ValueError(f"expected {nvars} caps, got {len(caps)}")
    return caps


def _all_exponents(caps):
    return itertools.product(*(range(c + 1) for c in caps))


def _eye_minus(mat_series):
    k = len(mat_series)
    caps, ring = mat_series[0][0].caps, mat_series[0][0].ring
    one = TruncatedSeries.one(caps, ring)
    out = []
    for i in range(k):
        row = []
        for j in range(k):
            row.append(one - mat_series[i][j] if i == j else -mat_series[i][j])
        out.append(row)
    return out


def _xtay_series(mat, ring, caps) -> TruncatedSeries:
    """x^T A y with x = vars[0:m], y = vars[m:2m].

    Terms beyond the caps are dropped: monomial exponents only grow under
    multiplication, so they can never reach a within-cap coefficient.
    """
    m = _dim(mat)
    terms = {}
    for i in range(m):
        for j in range(m):
            v = _entry(mat, i, j, ring)
            if v != 0 and caps[i] > 0 and caps[m + j] > 0:
                e = [0] * (2 * m)
                e[i] = 1
                e[m + j] = 1
                terms[tuple(e)] = v
    return TruncatedSeries.from_terms(caps, ring, terms)


def _row_form(mat, i, ring, caps, offset=0) -> TruncatedSeries:
    """Linear form sum_j a_ij * z_{offset+j}; terms beyond the caps are dropped."""
    m = _dim(mat)
    terms = {}
    for j in range(m):
        v = _entry(mat, i, j, ring)
        if v != 0 and caps[offset + j] > 0:
            e = [0] * len(caps)
            e[offset + j] = 1
            terms[tuple(e)] = v
    return TruncatedSeries.from_terms(caps, ring, terms)


# ---------------------------------------------------------------------------
# MacMahon master theorem and Dixon's identity
# ---------------------------------------------------------------------------


def _inverse_det_eye_minus_za(mat, ring, caps) -> TruncatedSeries:
    m = _dim(mat)
    rows = []
    for i in range(m):
        row = []
        for j in range(m):
            v = _entry(mat, i, j, ring)
            terms = {}
            if v != 0:
                e = [0] * m
                e[i] = 1
                terms[tuple(e)] = -v
            if i == j:
                terms[(0,) * m] = 1
            row.append(TruncatedSeries.from_terms(caps, ring, terms))
        rows.append(row)
    return det_series(rows).inverse()


def _monomial_power_table(mat, ring, caps):
    """(Az)^p for every p <= caps, built incrementally over the exponent grid."""
    m = _dim(mat)
    forms = [_row_form(mat, i, ring, caps) for i in range(m)]
    table = [None] * math.prod(c + 1 for c in caps)
    table[0] = TruncatedSeries.one(caps, ring)
    strides = []
    acc = 1
    for c in reversed(caps):
        strides.append(acc)
        acc *= c + 1
    strides = list(reversed(strides))
    for idx, e in enumerate(_all_exponents(caps)):
        if idx == 0:
            continue
        i = next(k for k, ek in enumerate(e) if ek > 0)
        table[idx] = table[idx - strides[i]] * forms[i]
    return table


def verify_macmahon(a, cap: Union[int, Sequence[int]] = 2, tolerance: float = 1e-8) -> IdentityReport:
    """sum_p z^p/p! Per(A_{p,p}) = 1/Det(I - Diag(z) A), coefficientwise up to cap.

    The permanent side comes from `permanent_naive`; in the exact ring,
    coefficients whose repeated weight exceeds the brute-force guard are
    checked against the monomial coefficient p![z^p](Az)^p instead.
    """
    mat, ring = _normalize(a)
    m = _dim(mat)
    caps = _caps(cap, m)
    inv = _inverse_det_eye_minus_za(mat, ring, caps)
    mono = _monomial_power_table(mat, ring, caps) if ring == RATIONAL else None
    acc = _Tracker()
    for idx, p in enumerate(_all_exponents(caps)):
        rhs = inv.coefficient(p)
        pf = factorial_product(p)
        if weight(p) <= NAIVE_ORACLE_WEIGHT or ring == COMPLEX:
            per = _per(mat, p, p)
            ref = Fraction(per, pf) if ring == RATIONAL else per / pf
            acc.add(rhs, ref)
            if mono is not None:
                acc.add(mono[idx].coefficient(p), ref)
        else:
            acc.add(rhs, mono[idx].coefficient(p))
    return acc.report("macmahon", caps, tolerance, ring)


def verify_dixon(n_max: int = 4, tolerance: float = 0.0) -> IdentityReport:
    """Dixon's identity from the doubly-repeated 3x3 cyclic sign matrix.

    For p = (2n, 2n, 2n) the quantities p![z^p](1/Det(I-ZA)),
    p![z^p](Az)^p, p! * sum_k (-1)^k C(2n,k)^3 and
    p! * (-1)^n (3n)!/(n!)^3 must agree exactly.
    """
    caps = (2 * n_max,) * 3
    inv = _inverse_det_eye_minus_za(DIXON_MATRIX, RATIONAL, caps)
    mono = _monomial_power_table(DIXON_MATRIX, RATIONAL, caps)
    strides = ((2 * n_max + 1) ** 2, 2 * n_max + 1, 1)
    acc = _Tracker()
    for n in range(1, n_max + 1):
        p = (2 * n,) * 3
        pf = factorial_product(p)
        idx = sum(e * s for e, s in zip(p, strides))
        q_mmt = pf * inv.coefficient(p)
        q_mono = pf * mono[idx].coefficient(p)
        binom_sum = sum((-1) ** k * math.comb(2 * n, k) ** 3 for k in range(2 * n + 1))
        closed = (-1) ** n * math.factorial(3 * n) // math.factorial(n) ** 3
        acc.add(q_mmt, q_mono)
        acc.add(q_mmt, pf * binom_sum)
        acc.add(q_mmt, pf * closed)
    return acc.report("dixon", caps, tolerance, RATIONAL)


# ---------------------------------------------------------------------------
# Two-matrix / N-matrix generalizations
# ---------------------------------------------------------------------------


def _two_matrix_rhs(mat_a, mat_b, ring, caps) -> TruncatedSeries:
    """1/Det(I - X A Y B) with X = Diag(x), Y = Diag(y)."""
    m = _dim(mat_a)
    rows = []
    for i in range(m):
        row = []
        for l in range(m):
            terms = {}
            for k in range(m):
                v = _entry(mat_a, i, k, ring) * _entry(mat_b, k, l, ring)
                if v != 0:
                    e = [0] * (2 * m)
                    e[i] = 1
                    e[m + k] = 1
                    key = tuple(e)
                    terms[key] = terms.get(key, 0) + v
            row.append(TruncatedSeries.from_terms(caps, ring, terms))
        rows.append(row)
    return det_series(_eye_minus(rows)).inverse()


def verify_mmmt_two(a, b, cap: Union[int, Sequence[int]] = 2, tolerance: float = 1e-8) -> IdentityReport:
    """Two-matrix master theorem, both formulations.

    Checks sum x^p y^q/(p!q!) Per(A_{p,q}) Per(B_{q,p}) = 1/Det(I-XAYB), the
    equivalent form with Per(B^T_{p,q}) inside, and that the two left-hand
    coefficient tables agree.
    """
    mat_a, ring_a = _normalize(a)
    mat_b, ring_b = _normalize(b)
    if ring_a != ring_b:
        raise ValueError("matrices must live over the same ring")
    ring = ring_a
    m = _dim(mat_a)
    if _dim(mat_b) != m:
        raise ValueError("matrices must have equal dimension")
    caps = _caps(cap, 2 * m)
    rhs = _two_matrix_rhs(mat_a, mat_b, ring, caps)
    bt = _transpose(mat_b)
    acc = _Tracker()
    for p in _all_exponents(caps[:m]):
        for q in _all_exponents(caps[m:]):
            denom = factorial_product(p) * factorial_product(q)
            pa = _per(mat_a, p, q)
            lhs1 = pa * _per(mat_b, q, p)
            lhs2 = pa * _per(bt, p, q)
            if ring == RATIONAL:
                lhs1, lhs2 = Fraction(lhs1, denom), Fraction(lhs2, denom)
            else:
                lhs1, lhs2 = lhs1 / denom, lhs2 / denom
            r = rhs.coefficient(p + q)
            acc.add(lhs1, r)
            acc.add(lhs2, r)
            acc.add(lhs1, lhs2)
    return acc.report("mmmt-two", caps, tolerance, ring)


def _n_matrix_rhs(mats, ring, caps) -> TruncatedSeries:
    """1/Det(I - Z_1 A^(1) ... Z_N A^(N)), variable block k holding Diag(z_k)."""
    n_mats = len(mats)
    m = _dim(mats[0])
    chain = None
    for k, mat in enumerate(mats):
        block = []
        for i in range(m):
            row = []
            for j in range(m):
                v = _entry(mat, i, j, ring)
                e = [0] * (n_mats * m)
                e[k * m + i] = 1
                terms = {tuple(e): v} if v != 0 else {}
                row.append(TruncatedSeries.from_terms(caps, ring, terms))
            block.append(row)
        chain = block if chain is None else series_mat_mul(chain, block)
    return det_series(_eye_minus(chain)).inverse()


def verify_mmmt_n(matrices, cap: Union[int, Sequence[int]] = 1, tolerance: float = 1e-8) -> IdentityReport:
    """N-matrix chain: sum prod z_k^{p_k}/p_k! Per(A^(k)_{p_k, p_{k+1}}) = 1/Det(I - Z_1 A^(1) ... Z_N A^(N))."""
    norm = [_normalize(a) for a in matrices]
    n_mats = len(norm)
    if n_mats < 2:
        raise ValueError("need at least two matrices")
    ring = norm[0][1]
    if any(r != ring for _, r in norm):
        raise ValueError("matrices must live over the same ring")
    mats = [m for m, _ in norm]
    m = _dim(mats[0])
    if any(_dim(x) != m for x in mats):
        raise ValueError("matrices must have equal dimension")
    caps = _caps(cap, n_mats * m)
    if math.prod(c + 1 for c in caps) > 200_000:
        raise TooLarge("coefficient table too large")
    rhs = _n_matrix_rhs(mats, ring, caps)
    acc = _Tracker()
    per_block = [list(_all_exponents(caps[k * m : (k + 1) * m])) for k in range(n_mats)]
    for ps in itertools.product(*per_block):
        weights = {weight(p) for p in ps}
        if len(weights) == 1:
            lhs = 1
            for k in range(n_mats):
                lhs = lhs * _per(mats[k], ps[k], ps[(k + 1) % n_mats])
            denom = math.prod(factorial_product(p) for p in ps)
            lhs = Fraction(lhs, denom) if ring == RATIONAL else lhs / denom
        else:
            lhs = Fraction(0) if ring == RATIONAL else 0j
        acc.add(lhs, rhs.coefficient(tuple(itertools.chain.from_iterable(ps))))
    return acc.report("mmmt-n", caps, tolerance, ring)


def verify_corollary_rank_one(a, p, q, tolerance: float = 1e-8) -> IdentityReport:
    """Per(A_{p,q}) = (p!q!/n!) [x^p y^q] (x^T A y)^n for |p| = |q| = n."""
    mat, ring = _normalize(a)
    p, q = tuple(p), tuple(q)
    n = weight(p)
    if weight(q) != n:
        raise WeightMismatch(f"|p| = {n} but |q| = {weight(q)}")
    caps = p + q
    s = _xtay_series(mat, ring, caps)
    coef = s.power(n).coefficient(caps)
    factor = Fraction(factorial_product(p) * factorial_product(q), math.factorial(n))
    rhs = factor * coef if ring == RATIONAL else float(factor) * coef
    acc = _Tracker()
    acc.add(_per(mat, p, q), rhs)
    return acc.report("corollary-rank-one", caps, tolerance, ring)


# ---------------------------------------------------------------------------
# Generating-function family
# ---------------------------------------------------------------------------

GENERATING_CHOICES = ("exp", "geom", "pow", "log")


def verify_generating_function(
    a,
    f: str,
    cap: Union[int, Sequence[int]] = 2,
    tolerance: float = 1e-8,
    power: Optional[int] = None,
) -> IdentityReport:
    """f(x^T A y) = sum f_n n! x^p y^q/(p!q!) Per(A_{p,q}), coefficientwise.

    f is one of 'exp' (Jackson's formula), 'geom' (1/(1-z), the rank-one
    corollary's generating form), 'pow' (z^power), or 'log' (-log(1-z)).
    """
    if f not in GENERATING_CHOICES:
        raise ValueError(f"unknown generating function {f!r}")
    if f == "pow" and power is None:
        raise ValueError("power must be given for f='pow'")
    mat, ring = _normalize(a)
    m = _dim(mat)
    caps = _caps(cap, 2 * m)
    w = _xtay_series(mat, ring, caps)
    one = TruncatedSeries.one(caps, ring)
    if f == "exp":
        lhs_series = w.exp()
    elif f == "geom":
        lhs_series = (one - w).inverse()
    elif f == "pow":
        lhs_series = w.power(power)
    else:
        lhs_series = -((one - w).log())

    def fn_times_nfac(n: int):
        # f_n * n! for the chosen f, exact.
        if f == "exp":
            return 1
        if f == "geom":
            return math.factorial(n)
        if f == "pow":
            return math.factorial(n) if n == power else 0
        return 0 if n == 0 else math.factorial(n - 1)

    acc = _Tracker()
    for p in _all_exponents(caps[:m]):
        for q in _all_exponents(caps[m:]):
            n = weight(p)
            if weight(q) == n and fn_times_nfac(n) != 0:
                denom = factorial_product(p) * factorial_product(q)
                num = fn_times_nfac(n) * _per(mat, p, q)
                ref = Fraction(num, denom) if ring == RATIONAL else num / denom
            else:
                ref = Fraction(0) if ring == RATIONAL else 0j
            acc.add(lhs_series.coefficient(p + q), ref)
    return acc.report(f"generating-{f}", caps, tolerance, ring)


def verify_monomial_glynn(a, p, cap: Union[int, Sequence[int]] = 2, tolerance: float = 1e-8) -> IdentityReport:
    """sum_q z^q/q! Per(A_{p,q}) = (Az)^p, coefficientwise up to cap."""
    mat, ring = _normalize(a)
    m = _dim(mat)
    p = tuple(p)
    caps = _caps(cap, m)
    rhs = TruncatedSeries.one(caps, ring)
    for i in range(m):
        if p[i]:
            rhs = rhs * _row_form(mat, i, ring, caps).power(p[i])
    acc = _Tracker()
    for q in _all_exponents(caps):
        per = _per(mat, p, q)
        qf = factorial_product(q)
        ref = Fraction(per, qf) if ring == RATIONAL else per / qf
        acc.add(ref, rhs.coefficient(q))
    return acc.report("monomial", caps, tolerance, ring)


# ---------------------------------------------------------------------------
# Sum formula, Laplace expansion, sum of two permanents
# ---------------------------------------------------------------------------


def _split_coef(num_fact: int, parts) -> int:
    denom = math.prod(factorial_product(s) for s in parts)
    return Fraction(num_fact, denom)


def verify_sum_formula(a, b, pattern: RepetitionPattern, tolerance: float = 1e-8) -> IdentityReport:
    """Per((A+B)_{p,q}) = sum over splits s+t=p, u+v=q of p!q!/(s!t!u!v!) Per(A_{s,u})Per(B_{t,v})."""
    mat_a, ring_a = _normalize(a)
    mat_b, ring_b = _normalize(b)
    ring = ring_a
    if ring_a != ring_b:
        raise ValueError("matrices must live over the same ring")
    p, q = pattern.rows, pattern.cols
    if isinstance(mat_a, np.ndarray):
        mat_sum = mat_a + mat_b
    else:
        mat_sum = tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(mat_a, mat_b))
    lhs = _per(mat_sum, p, q)
    pq_fact = factorial_product(p) * factorial_product(q)
    total = Fraction(0) if ring == RATIONAL else 0j
    for s, t in enumerate_splits(p, 2):
        for u, v in enumerate_splits(q, 2):
            if weight(s) != weight(u):
                continue
            coef = _split_coef(pq_fact, (s, t, u, v))
            term = _per(mat_a, s, u) * _per(mat_b, t, v)
            total += coef * term if ring == RATIONAL else float(coef) * term
    acc = _Tracker()
    acc.add(lhs, total)
    return acc.report("sum-formula", p + q, tolerance, ring)


def verify_laplace(a, pattern: RepetitionPattern, k: int, tolerance: float = 1e-8) -> IdentityReport:
    """Laplace expansion: Per(A_{p,q}) = (k!l!/(k+l)!) sum over weight-(k,l) splits."""
    mat, ring = _normalize(a)
    p, q = pattern.rows, pattern.cols
    n = weight(p)
    if weight(q) != n:
        raise WeightMismatch(f"|p| = {n} but |q| = {weight(q)}")
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= {n}")
    l = n - k
    lhs = _per(mat, p, q)
    pq_fact = factorial_product(p) * factorial_product(q)
    prefactor = Fraction(math.factorial(k) * math.factorial(l), math.factorial(n))
    total = Fraction(0) if ring == RATIONAL else 0j
    for s, t in enumerate_splits(p, 2, (k, l)):
        for u, v in enumerate_splits(q, 2, (k, l)):
            coef = prefactor * _split_coef(pq_fact, (s, t, u, v))
            term = _per(mat, s, u) * _per(mat, t, v)
            total += coef * term if ring == RATIONAL else float(coef) * term
    acc = _Tracker()
    acc.add(lhs, total)
    return acc.report("laplace", p + q, tolerance, ring)


def verify_sum_of_permanents(a, b, pattern: RepetitionPattern, tolerance: float = 1e-8) -> IdentityReport:
    """Sum of two permanents from the -log(1-z) generating function.

    Per(A_{p,q}) + Per(B_{p,q}) equals an alternating sum over three-way
    splits with weight pattern (k, k, n-2k), weighted by 1/C(n-1, k).
    """
    mat_a, ring_a = _normalize(a)
    mat_b, ring_b = _normalize(b)
    ring = ring_a
    if ring_a != ring_b:
        raise ValueError("matrices must live over the same ring")
    p, q = pattern.rows, pattern.cols
    n = weight(p)
    if weight(q) != n:
        raise WeightMismatch(f"|p| = {n} but |q| = {weight(q)}")
    if n < 1:
        raise ValueError("need |p| = |q| >= 1")
    if isinstance(mat_a, np.ndarray):
        mat_sum = mat_a + mat_b
    else:
        mat_sum = tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(mat_a, mat_b))
    lhs = _per(mat_a, p, q) + _per(mat_b, p, q)
    pq_fact = factorial_product(p) * factorial_product(q)
    total = Fraction(0) if ring == RATIONAL else 0j
    for k in range(n // 2 + 1):
        outer = Fraction((-1) ** k, math.comb(n - 1, k))
        ksum = Fraction(0) if ring == RATIONAL else 0j
        for aa, bb, cc in enumerate_splits(p, 3, (k, k, n - 2 * k)):
            for aa2, bb2, cc2 in enumerate_splits(q, 3, (k, k, n - 2 * k)):
                coef = _split_coef(pq_fact, (aa, bb, cc, aa2, bb2, cc2))
                term = _per(mat_a, aa, aa2) * _per(mat_b, bb, bb2) * _per(mat_sum, cc, cc2)
                ksum += coef * term if ring == RATIONAL else float(coef) * term
        total += outer * ksum if ring == RATIONAL else float(outer) * ksum
    acc = _Tracker()
    acc.add(lhs, total)
    return acc.report("sum-of-permanents", p + q, tolerance, ring)


# ---------------------------------------------------------------------------
# Even-matrix square-root identities
# ---------------------------------------------------------------------------


def _v_sign(x: Sequence[float]) -> np.ndarray:
    m = len(x)
    d = np.diag(np.asarray(x, dtype=np.complex128))
    z = np.zeros((m, m), dtype=np.complex128)
    return np.block([[z, d], [d, z]])


def verify_even_matrix(a, mode: str = "single", cap: Union[int, Sequence[int]] = 2, tolerance: float = 1e-8) -> IdentityReport:
    """Square-root determinant identities for a (2m) x (2m) matrix M.

    mode='single': Per(M) is the z^m coefficient of the sign-averaged
    1/sqrt(Det(I - z V_x M V_y M^T)).
    mode='full': sum x^p y^q/(p!q!) Per(M_{p+p,q+q}) = 1/sqrt(Det(I - V_x M V_y M^T))
    in 2m formal variables, where p+p repeats both halves identically.
    """
    if isinstance(a, (np.ndarray, ComplexMatrix, UnitaryMatrix)):
        mat = as_array(a)
    else:
        mat = np.array([[complex(v) for v in row] for row in a], dtype=np.complex128)
    dim = mat.shape[0]
    if dim % 2 != 0:
        raise OddDimension(f"matrix dimension {dim} is odd")
    m = dim // 2
    if mode == "single":
        caps = (m,)
        acc_series = TruncatedSeries.zero(caps, COMPLEX)
        for x in itertools.product((1, -1), repeat=m):
            vx = _v_sign(x)
            for y in itertools.product((1, -1), repeat=m):
                c = vx @ mat @ _v_sign(y) @ mat.T
                rows = []
                for i in range(dim):
                    row = []
                    for j in range(dim):
                        terms = {}
                        if i == j:
                            terms[(0,)] = 1
                        if c[i, j] != 0:
                            terms[(1,)] = -complex(c[i, j])
                        row.append(TruncatedSeries.from_terms(caps, COMPLEX, terms))
                    rows.append(row)
                g = det_series(rows).sqrt_inverse()
                sign = math.prod(x) * math.prod(y)
                acc_series = acc_series + (g if sign > 0 else -g)
        value = acc_series.scale(1.0 / 4**m).coefficient((m,))
        acc = _Tracker()
        acc.add(value, permanent_naive(mat).value)
        return acc.report("even-single", caps, tolerance, COMPLEX)
    if mode != "full":
        raise ValueError(f"unknown mode {mode!r}")
    caps = _caps(cap, 2 * m)
    const = [
        [TruncatedSeries.constant(caps, COMPLEX, complex(mat[i, j])) for j in range(dim)]
        for i in range(dim)
    ]
    const_t = [
        [TruncatedSeries.constant(caps, COMPLEX, complex(mat[j, i])) for j in range(dim)]
        for i in range(dim)
    ]
    zero = TruncatedSeries.zero(caps, COMPLEX)

    def v_series(offset):
        out = [[zero for _ in range(dim)] for _ in range(dim)]
        for i in range(m):
            e = [0] * (2 * m)
            e[offset + i] = 1
            mono = TruncatedSeries.monomial(caps, COMPLEX, e)
            out[i][m + i] = mono
            out[m + i][i] = mono
        return out

    prod = series_mat_mul(series_mat_mul(v_series(0), const), series_mat_mul(v_series(m), const_t))
    g = det_series(_eye_minus(prod)).sqrt_inverse()
    acc = _Tracker()
    for p in _all_exponents(caps[:m]):
        for q in _all_exponents(caps[m:]):
            per = _per(mat, p + p, q + q)
            denom = factorial_product(p) * factorial_product(q)
            acc.add(g.coefficient(p + q), per / denom)
    return acc.report("even-full", caps, tolerance, COMPLEX)


def verify_tmss_overlap(u, lam, mu, trunc: int = 6, tolerance: float = 1e-6) -> IdentityReport:
    """Doubly-repeated permanent series against the Gaussian overlap.

    sum_{p,q} lam^p mu^q/(p!q!) Per(U_{p+p,q+q}) (truncated to |p|,|q| <= trunc)
    is compared with 1/sqrt(Det(I - V_lam U V_mu U^T)); the reported
    tail_bound is the geometric bound on the dropped terms.
    """
    arr = as_array(u)
    lam = np.asarray(lam, dtype=np.complex128)
    mu = np.asarray(mu, dtype=np.complex128)
    m = lam.size
    if arr.shape[0] != 2 * m or mu.size != m:
        raise ValueError("matrix must be 2m x 2m with length-m amplitude vectors")
    if np.any(np.abs(lam) >= 1) or np.any(np.abs(mu) >= 1):
        raise AmplitudeOutOfRange("need |lam_k| < 1 and |mu_k| < 1")
    if (1 << (2 * trunc)) * max(2 * trunc, 1) > TERM_BUDGET:
        raise TooLarge("truncation order too large for the inner permanents")
    lhs = 0j
    for k in range(trunc + 1):
        for p in enumerate_weight(m, k):
            for q in enumerate_weight(m, k):
                per = permanent_ryser(repeat_matrix(arr, RepetitionPattern(p + p, q + q))).value
                coef = np.prod(lam**np.array(p)) * np.prod(mu**np.array(q))
                lhs += coef * per / (factorial_product(p) * factorial_product(q))
    vl = np.diag(lam)
    vm = np.diag(mu)
    zero = np.zeros((m, m), dtype=np.complex128)
    v_lam = np.block([[zero, vl], [vl, zero]])
    v_mu = np.block([[zero, vm], [vm, zero]])
    det = np.linalg.det(np.eye(2 * m) - v_lam @ arr @ v_mu @ arr.T)
    rhs = 1.0 / np.sqrt(complex(det))
    r = float(np.max(np.abs(lam)) * np.max(np.abs(mu)))
    tail = 0.0
    k = trunc + 1
    while k < trunc + 10_000:
        term = count_weight(m, k) ** 2 * r**k
        tail += term
        if term < 1e-30:
            break
        k += 1
    acc = _Tracker()
    acc.add(lhs, rhs)
    return acc.report("tmss-overlap", (trunc,) * (2 * m), tolerance, COMPLEX, tail_bound=tail)


# ---------------------------------------------------------------------------
# Binomial-square application
# ---------------------------------------------------------------------------


def s_n(n: int, a: Fraction, b: Fraction) -> Fraction:
    """S_n(a, b) = sum_k C(n,k)^2 a^k b^(n-k)."""
    a, b = Fraction(a), Fraction(b)
    return sum(Fraction(math.comb(n, k) ** 2) * a**k * b ** (n - k) for k in range(n + 1))


def verify_sn_identity(a, b, n: int, tolerance: float = 0.0) -> IdentityReport:
    """S_n(a,b)^2 = sum_l C(2l,l) C(n+l,2l) (-1)^(n-l) (a-b)^(2n-2l) S_l(a^2,b^2), exactly.

    Also asserts the a=b=1 specialization sum_k C(n,k)^2 = C(2n,n).
    """
    a, b = Fraction(a), Fraction(b)
    lhs = s_n(n, a, b) ** 2
    rhs = sum(
        Fraction(math.comb(2 * l, l) * math.comb(n + l, 2 * l) * (-1) ** (n - l))
        * (a - b) ** (2 * n - 2 * l)
        * s_n(l, a**2, b**2)
        for l in range(n + 1)
    )
    acc = _Tracker()
    acc.add(lhs, rhs)
    acc.add(s_n(n, Fraction(1), Fraction(1)), Fraction(math.comb(2 * n, n)))
    return acc.report("sn", (n,), tolerance, RATIONAL)


# ---------------------------------------------------------------------------
# Registry / batch runner
# ---------------------------------------------------------------------------


def _battery_macmahon(seed, tol, matrix=None, cap=None, **_):
    mat = matrix if matrix is not None else rng.unit_disk_matrix(3, seed)
    return [
        verify_macmahon(mat, cap if cap is not None else 2, tol),
        verify_macmahon(DIXON_MATRIX, 4, 0.0),
    ]


def _battery_dixon(seed, tol, **_):
    return [verify_dixon(4, 0.0)]


def _battery_mmmt_two(seed, tol, matrix=None, matrix_b=None, cap=None, **_):
    a = matrix if matrix is not None else rng.unit_disk_matrix(2, seed)
    b = matrix_b if matrix_b is not None else rng.unit_disk_matrix(2, seed + 1)
    m = a.shape[0] if isinstance(a, np.ndarray) else len(a)
    return [
        verify_mmmt_two(a, b, cap if cap is not None else 2, tol),
        verify_mmmt_two(a, np.eye(m), 2, tol),
        verify_mmmt_two(a, np.ones((m, m)), 2, tol),
    ]


def _battery_mmmt_n(seed, tol, **_):
    mats = [rng.unit_disk_matrix(2, seed + k) for k in range(3)]
    return [verify_mmmt_n(mats, 1, tol), verify_mmmt_n(mats[:2], 2, tol)]


def _battery_corollary(seed, tol, matrix=None, rows=None, cols=None, **_):
    a = matrix if matrix is not None else rng.unit_disk_matrix(3, seed)
    p = tuple(rows) if rows is not None else (2, 1, 0)
    q = tuple(cols) if cols is not None else (1, 1, 1)
    return [verify_corollary_rank_one(a, p, q, tol)]


def _battery_generating(f):
    def run(seed, tol, matrix=None, cap=None, **_):
        a = matrix if matrix is not None else rng.unit_disk_matrix(2, seed)
        kwargs = {"power": 2} if f == "pow" else {}
        return [verify_generating_function(a, f, cap if cap is not None else 2, tol, **kwargs)]

    return run


def _battery_monomial(seed, tol, matrix=None, rows=None, cap=None, **_):
    a = matrix if matrix is not None else rng.unit_disk_matrix(3, seed)
    p = tuple(rows) if rows is not None else (1, 2, 0)
    return [verify_monomial_glynn(a, p, cap if cap is not None else 3, tol)]


def _battery_sum_formula(seed, tol, matrix=None, matrix_b=None, **_):
    a = matrix if matrix is not None else rng.unit_disk_matrix(3, seed)
    b = matrix_b if matrix_b is not None else rng.unit_disk_matrix(3, seed + 1)
    pat = RepetitionPattern((1, 1, 1), (1, 1, 1))
    return [verify_sum_formula(a, b, pat, tol)]


def _battery_laplace(seed, tol, matrix=None, **_):
    a = matrix if matrix is not None else rng.unit_disk_matrix(3, seed)
    return [
        verify_laplace(a, RepetitionPattern((1, 1, 1), (1, 1, 1)), 1, tol),
        verify_laplace(rng.unit_disk_matrix(2, seed + 1), RepetitionPattern((2, 2), (2, 2)), 2, tol),
    ]


def _battery_sum_of_permanents(seed, tol, matrix=None, matrix_b=None, **_):
    a = matrix if matrix is not None else rng.unit_disk_matrix(3, seed)
    b = matrix_b if matrix_b is not None else rng.unit_disk_matrix(3, seed + 1)
    out = [verify_sum_of_permanents(a, b, RepetitionPattern((1, 1, 1), (1, 1, 1)), tol)]
    a2 = rng.unit_disk_matrix(2, seed + 2)
    b2 = rng.unit_disk_matrix(2, seed + 3)
    out.append(verify_sum_of_permanents(a2, b2, RepetitionPattern((2, 1), (1, 2)), tol))
    return out


def _battery_even_single(seed, tol, matrix=None, **_):
    a = matrix if matrix is not None else rng.unit_disk_matrix(4, seed)
    return [verify_even_matrix(a, "single", tolerance=tol)]


def _battery_even_full(seed, tol, matrix=None, cap=None, **_):
    a = matrix if matrix is not None else rng.unit_disk_matrix(4, seed)
    return [verify_even_matrix(a, "full", cap if cap is not None else 2, tol)]


def _battery_tmss(seed, tol, **_):
    u = rng.haar_unitary(2, seed)
    return [verify_tmss_overlap(u, [0.2], [0.15 + 0.1j], trunc=6, tolerance=max(tol, 1e-6))]


def _battery_sn(seed, tol, **_):
    g = rng.generator(seed)
    a = Fraction(int(g.integers(-9, 10)), int(g.integers(1, 10)))
    b = Fraction(int(g.integers(-9, 10)), int(g.integers(1, 10)))
    return [verify_sn_identity(3, -1, 5, 0.0), verify_sn_identity(a, b, 4, 0.0)]


IDENTITY_REGISTRY: dict[str, Callable] = {
    "macmahon": _battery_macmahon,
    "dixon": _battery_dixon,
    "mmmt-two": _battery_mmmt_two,
    "mmmt-n": _battery_mmmt_n,
    "corollary-rank-one": _battery_corollary,
    "generating-exp": _battery_generating("exp"),
    "generating-geom": _battery_generating("geom"),
    "generating-pow": _battery_generating("pow"),
    "generating-log": _battery_generating("log"),
    "monomial": _battery_monomial,
    "sum-formula": _battery_sum_formula,
    "laplace": _battery_laplace,
    "sum-of-permanents": _battery_sum_of_permanents,
    "even-single": _battery_even_single,
    "even-full": _battery_even_full,
    "tmss-overlap": _battery_tmss,
    "sn": _battery_sn,
}


def run_battery(
    names: Optional[Sequence[str]] = None,
    seed: int = 7,
    tolerance: float = 1e-8,
    max_workers: Optional[int] = None,
    **overrides,
) -> list[IdentityReport]:
    """Run identity batteries in registry order; optional thread pool."""
    if names is None:
        names = list(IDENTITY_REGISTRY)
    for name in names:
        if name not in IDENTITY_REGISTRY:
            raise KeyError(f"unknown identity {name!r}")
    if max_workers is None or max_workers <= 1 or len(names) <= 1:
        batches = [IDENTITY_REGISTRY[name](seed, tolerance, **overrides) for name in names]
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            futures = [pool.submit(IDENTITY_REGISTRY[name], seed, tolerance, **overrides) for name in names]
            batches = [f.result() for f in futures]
    return [report for batch in batches for report in batch]
