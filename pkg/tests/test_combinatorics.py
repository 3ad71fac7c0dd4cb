import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from permkit.combinatorics import (
    RepetitionPattern,
    count_weight,
    enumerate_splits,
    enumerate_weight,
    factorial_product,
    repeat_matrix,
    weight,
)
from permkit.errors import DimensionMismatch
from permkit.permanents import permanent_naive


class TestFactorialProduct:
    def test_zeros(self):
        assert factorial_product((0, 0, 0)) == 1

    def test_mixed(self):
        assert factorial_product((2, 1, 3)) == 12

    def test_fives(self):
        assert factorial_product((5, 5)) == 14400

    def test_big_integer(self):
        assert factorial_product((25,)) == math.factorial(25)


class TestRepeatMatrix:
    def test_spec_layout(self):
        a = np.array([[1, 2], [3, 4]], dtype=complex)
        out = repeat_matrix(a, RepetitionPattern((2, 1), (1, 2)))
        assert np.array_equal(out, np.array([[1, 2, 2], [1, 2, 2], [3, 4, 4]]))

    def test_uniform_is_identity_transformation(self):
        a = np.array([[1, 2], [3, 4]], dtype=complex)
        assert np.array_equal(repeat_matrix(a, RepetitionPattern.uniform(2)), a)

    def test_empty_pattern_gives_permanent_one(self):
        a = np.ones((2, 2))
        out = repeat_matrix(a, RepetitionPattern((0, 0), (0, 0)))
        assert out.shape == (0, 0)
        assert permanent_naive(out).value == 1

    def test_shapes(self):
        a = np.ones((3, 3))
        out = repeat_matrix(a, RepetitionPattern((2, 0, 1), (1, 1, 4)))
        assert out.shape == (3, 6)

    def test_exact_stays_exact(self):
        a = ((Fraction(1, 2), 2), (3, 4))
        out = repeat_matrix(a, RepetitionPattern((2, 1), (1, 1)))
        assert out == ((Fraction(1, 2), 2), (Fraction(1, 2), 2), (3, 4))

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            repeat_matrix(np.ones((2, 2)), RepetitionPattern((1, 1, 1), (1, 1, 1)))


class TestEnumerateWeight:
    def test_two_vars(self):
        assert list(enumerate_weight(2, 2)) == [(0, 2), (1, 1), (2, 0)]

    def test_zero_weight(self):
        assert list(enumerate_weight(3, 0)) == [(0, 0, 0)]

    def test_count_example(self):
        assert len(list(enumerate_weight(3, 4))) == 15

    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=10))
    def test_stars_and_bars(self, m, n):
        items = list(enumerate_weight(m, n))
        assert len(items) == count_weight(m, n) == math.comb(n + m - 1, m - 1)
        assert all(weight(p) == n for p in items)
        assert items == sorted(items)
        assert len(set(items)) == len(items)


class TestEnumerateSplits:
    def test_two_parts_unit(self):
        assert list(enumerate_splits((1, 0), 2)) == [((0, 0), (1, 0)), ((1, 0), (0, 0))]

    def test_two_parts_count(self):
        assert len(list(enumerate_splits((1, 1), 2))) == 4

    def test_three_parts_count(self):
        assert len(list(enumerate_splits((2, 1), 3))) == 18

    def test_parts_sum_back(self):
        p = (2, 0, 3)
        for split in enumerate_splits(p, 3):
            assert tuple(sum(c) for c in zip(*split)) == p

    def test_weight_filter(self):
        splits = list(enumerate_splits((2, 2), 2, (1, 3)))
        assert splits
        assert all(weight(s) == 1 and weight(t) == 3 for s, t in splits)

    def test_invalid_parts(self):
        with pytest.raises(ValueError):
            list(enumerate_splits((1,), 4))


class TestRepetitionPattern:
    def test_square_compatible(self):
        assert RepetitionPattern((2, 0), (1, 1)).square_compatible()
        assert not RepetitionPattern((2, 1), (1, 1)).square_compatible()

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            RepetitionPattern((-1, 1), (0, 0))

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            RepetitionPattern((1,), (1, 1))
