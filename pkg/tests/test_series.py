import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permkit.errors import (
    BadConstantTerm,
    CapMismatch,
    ConstantTermNotOne,
    ExceedsCap,
    NonInvertibleConstantTerm,
    RingMismatch,
    TooLarge,
)
from permkit.identities import DIXON_MATRIX
from permkit.series import COMPLEX, RATIONAL, TruncatedSeries, det_series

from oracles import leibniz_determinant


def rational_series(caps, min_exp=-6, max_exp=6):
    """Hypothesis strategy: random rational series with constant term 1."""
    size = math.prod(c + 1 for c in caps)

    @st.composite
    def build(draw):
        nums = draw(st.lists(st.integers(min_exp, max_exp), min_size=size, max_size=size))
        dens = draw(st.lists(st.integers(1, 4), min_size=size, max_size=size))
        coeffs = [Fraction(n, d) for n, d in zip(nums, dens)]
        coeffs[0] = Fraction(1)
        return TruncatedSeries(caps, RATIONAL, tuple(coeffs))

    return build()


class TestBasics:
    def test_one_minus_z_squared(self):
        one = TruncatedSeries.one((2,), RATIONAL)
        z = TruncatedSeries.variable((2,), RATIONAL, 0)
        prod = (one + z) * (one - z)
        assert prod.coeffs == (1, 0, -1)

    def test_mul_by_one(self):
        s = TruncatedSeries.from_terms((2, 2), RATIONAL, {(1, 0): 3, (2, 1): Fraction(1, 2)})
        assert (s * TruncatedSeries.one((2, 2), RATIONAL)).coeffs == s.coeffs

    def test_binomial_coefficient(self):
        xy = TruncatedSeries.from_terms((3, 3), RATIONAL, {(1, 0): 1, (0, 1): 1})
        assert xy.power(3).coefficient((2, 1)) == 3

    def test_coefficient_basics(self):
        one = TruncatedSeries.one((2,), RATIONAL)
        assert one.coefficient((0,)) == 1
        sq = TruncatedSeries.from_terms((2, 2), RATIONAL, {(1, 0): 1, (0, 1): 1}).power(2)
        assert sq.coefficient((1, 1)) == 2

    def test_exceeds_cap(self):
        s = TruncatedSeries.one((2,), RATIONAL)
        with pytest.raises(ExceedsCap):
            s.coefficient((3,))

    def test_cap_and_ring_mismatch(self):
        a = TruncatedSeries.one((2,), RATIONAL)
        b = TruncatedSeries.one((3,), RATIONAL)
        c = TruncatedSeries.one((2,), COMPLEX)
        with pytest.raises(CapMismatch):
            a + b
        with pytest.raises(RingMismatch):
            a * c


class TestInverse:
    def test_geometric(self):
        one = TruncatedSeries.one((5,), RATIONAL)
        z = TruncatedSeries.variable((5,), RATIONAL, 0)
        assert (one - z).inverse().coeffs == (1,) * 6

    def test_inverse_of_one(self):
        one = TruncatedSeries.one((3, 3), RATIONAL)
        assert one.inverse().coeffs == one.coeffs

    def test_zero_constant_rejected(self):
        z = TruncatedSeries.variable((3,), RATIONAL, 0)
        with pytest.raises(NonInvertibleConstantTerm):
            z.inverse()

    @settings(max_examples=25, deadline=None)
    @given(rational_series((2, 2)))
    def test_round_trip(self, s):
        assert s.inverse().inverse().coeffs == s.coeffs

    @settings(max_examples=25, deadline=None)
    @given(rational_series((2, 2)))
    def test_mul_inverse_is_one(self, s):
        assert (s * s.inverse()).coeffs == TruncatedSeries.one((2, 2), RATIONAL).coeffs


class TestSqrtInverse:
    def test_one(self):
        one = TruncatedSeries.one((4,), RATIONAL)
        assert one.sqrt_inverse().coeffs == one.coeffs

    def test_geometric_square(self):
        one = TruncatedSeries.one((5,), RATIONAL)
        z = TruncatedSeries.variable((5,), RATIONAL, 0)
        s = (one - z) * (one - z)
        assert s.sqrt_inverse().coeffs == (1,) * 6

    def test_constant_term_guard(self):
        s = TruncatedSeries.constant((3,), RATIONAL, 2)
        with pytest.raises(ConstantTermNotOne):
            s.sqrt_inverse()

    @settings(max_examples=25, deadline=None)
    @given(rational_series((3, 2)))
    def test_square_times_s_is_one(self, s):
        t = s.sqrt_inverse()
        assert (t * t * s).coeffs == TruncatedSeries.one((3, 2), RATIONAL).coeffs


class TestExpLog:
    def test_exp_coefficients(self):
        z = TruncatedSeries.variable((6,), RATIONAL, 0)
        assert z.exp().coeffs == tuple(Fraction(1, math.factorial(k)) for k in range(7))

    def test_log_of_geometric(self):
        one = TruncatedSeries.one((6,), RATIONAL)
        z = TruncatedSeries.variable((6,), RATIONAL, 0)
        series = (one - z).inverse().log()
        assert series.coeffs == (0,) + tuple(Fraction(1, k) for k in range(1, 7))

    def test_exp_guard(self):
        with pytest.raises(BadConstantTerm):
            TruncatedSeries.one((3,), RATIONAL).exp()

    def test_log_guard(self):
        with pytest.raises(BadConstantTerm):
            TruncatedSeries.constant((3,), RATIONAL, 2).log()

    @settings(max_examples=25, deadline=None)
    @given(rational_series((2, 2)))
    def test_exp_log_round_trip(self, s):
        assert s.log().exp().coeffs == s.coeffs


class TestDetSeries:
    def test_two_by_two_one_variable(self):
        one = TruncatedSeries.one((2,), RATIONAL)
        z = TruncatedSeries.variable((2,), RATIONAL, 0)
        zero = TruncatedSeries.zero((2,), RATIONAL)
        d = det_series([[one - z, zero], [zero, one - z]])
        assert d.coeffs == (1, -2, 1)

    def test_diagonal_product(self):
        caps = (2, 2)
        a = TruncatedSeries.from_terms(caps, RATIONAL, {(0, 0): 1, (1, 0): 2})
        b = TruncatedSeries.from_terms(caps, RATIONAL, {(0, 0): 1, (0, 1): -3})
        zero = TruncatedSeries.zero(caps, RATIONAL)
        assert det_series([[a, zero], [zero, b]]).coeffs == (a * b).coeffs

    def test_dixon_matrix_against_leibniz(self):
        caps = (2, 2, 2)
        rows = []
        for i in range(3):
            row = []
            for j in range(3):
                terms = {}
                if i == j:
                    terms[(0, 0, 0)] = 1
                if DIXON_MATRIX[i][j] != 0:
                    e = [0, 0, 0]
                    e[i] = 1
                    terms[tuple(e)] = -DIXON_MATRIX[i][j]
                row.append(TruncatedSeries.from_terms(caps, RATIONAL, terms))
            rows.append(row)
        zero = TruncatedSeries.zero(caps, RATIONAL)
        assert det_series(rows).coeffs == leibniz_determinant(rows, zero).coeffs

    def test_polynomiality_degree_bound(self):
        # Det(I - Diag(z) A) has total degree <= m in the formal variables.
        caps = (3, 3, 3)
        rows = []
        for i in range(3):
            row = []
            for j in range(3):
                terms = {}
                if i == j:
                    terms[(0, 0, 0)] = 1
                e = [0, 0, 0]
                e[i] = 1
                terms[tuple(e)] = terms.get(tuple(e), 0) - (i + j + 1)
                row.append(TruncatedSeries.from_terms(caps, RATIONAL, terms))
            rows.append(row)
        assert det_series(rows).max_total_degree() <= 3

    def test_too_large(self):
        one = TruncatedSeries.one((1,), RATIONAL)
        mat = [[one] * 9 for _ in range(9)]
        with pytest.raises(TooLarge):
            det_series(mat)


class TestRingAxioms:
    @settings(max_examples=20, deadline=None)
    @given(rational_series((2, 2)), rational_series((2, 2)), rational_series((2, 2)))
    def test_exact_ring_axioms(self, a, b, c):
        assert ((a + b) + c).coeffs == (a + (b + c)).coeffs
        assert (a * b).coeffs == (b * a).coeffs
        assert ((a * b) * c).coeffs == (a * (b * c)).coeffs
        assert (a * (b + c)).coeffs == (a * b + a * c).coeffs

    def test_float_ring_axioms(self):
        import numpy as np

        g = np.random.default_rng(3)
        caps = (2, 2)
        size = 9

        def rand_series():
            vals = g.standard_normal(size) + 1j * g.standard_normal(size)
            return TruncatedSeries(caps, COMPLEX, tuple(complex(v) for v in vals))

        a, b, c = rand_series(), rand_series(), rand_series()
        lhs = a * (b + c)
        rhs = a * b + a * c
        assert max(abs(x - y) for x, y in zip(lhs.coeffs, rhs.coeffs)) <= 1e-10
