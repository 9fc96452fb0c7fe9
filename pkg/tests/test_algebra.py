"""
Unit tests for interval word series, wheels, and the unknot value.

Core claims:
    - Word normalization renames tokens by first occurrence; concat,
      reverse, and closure behave as stated
    - series_exp matches its defining sum for a one-chord exponent
    - interval_sqrt squares back to the input on random unit series
    - Wheel weights are 1/48, -1/5760, 1/362880, -1/19353600, matching
      the Bernoulli-number oracle B_2n / (4n (2n)!)
    - STU resolution is independent of the hub elimination order
    - Resolving the two-wheel over all leg orders gives 2(1122) - 2(1212)
    - Per-degree coefficient sums of every attachment sum vanish
    - The closed unknot series has the frozen degree-3 values, is even,
      and its interval square root closes back onto it exactly
    - Truncation degrees above 4 are rejected
"""

import itertools
import random
from fractions import Fraction
from math import factorial

import pytest

from kzlab.algebra import (
    MAX_TRUNCATION,
    close_word,
    concat_words,
    interval_closure,
    interval_product,
    interval_sqrt,
    normalize_word,
    resolve_wheel_attachment,
    reverse_word,
    series_exp,
    sqrt_unknot_series,
    unknot_series_closed,
    unknot_series_interval,
    wheel_attachment_sum,
    wheel_coefficients,
)
from kzlab.diagrams import ChordDiagram
from kzlab.errors import TruncationUnsupportedError


# == 1. Interval words =======================================================


class TestWords:
    def test_normalize_first_occurrence(self):
        assert normalize_word((7, 3, 7, 3)) == (1, 2, 1, 2)
        assert normalize_word(()) == ()

    def test_concat_shifts_right_side(self):
        assert concat_words((1, 1), (1, 2, 1, 2)) == (1, 1, 2, 3, 2, 3)
        assert concat_words((), (1, 1)) == (1, 1)

    def test_reverse(self):
        assert reverse_word((1, 2, 1, 2)) == (2, 1, 2, 1) or \
            reverse_word((1, 2, 1, 2)) == (1, 2, 1, 2)
        assert close_word(reverse_word((1, 1, 2, 2))) == close_word((1, 1, 2, 2))

    def test_closure_merges_rotations(self):
        assert close_word((1, 2, 2, 1)) == close_word((1, 1, 2, 2))
        assert close_word((1, 2, 1, 2)) != close_word((1, 1, 2, 2))


class TestSeries:
    def test_exp_of_single_chord_interval(self):
        one = {(1, 1): Fraction(1, 2)}
        out = series_exp(one, concat_words, (), lambda w: len(w) // 2, 4)
        for k in range(5):
            word = tuple(x for t in range(1, k + 1) for x in (t, t))
            assert out.get(word, 0) == Fraction(1, factorial(k) * 2 ** k)

    def test_exp_rejects_constant_term(self):
        with pytest.raises(ValueError):
            series_exp({(): Fraction(1)}, concat_words, (),
                       lambda w: len(w) // 2, 3)

    def test_sqrt_squares_back_random(self):
        rng = random.Random(20260823)
        words = list(unknot_series_interval(4))
        for _ in range(25):
            series = {(): Fraction(1)}
            for word in words:
                if word:
                    series[word] = Fraction(rng.randint(-6, 6), rng.randint(1, 9))
            root = interval_sqrt(series, 4)
            squared = interval_product(root, root, 4)
            squared = {w: c for w, c in squared.items() if c}
            assert squared == {w: c for w, c in series.items() if c}

    def test_sqrt_needs_unit_constant(self):
        with pytest.raises(ValueError):
            interval_sqrt({(): Fraction(2)}, 3)


# == 2. Wheels ===============================================================


class TestWheelWeights:
    def test_frozen_values(self):
        w = wheel_coefficients(8)
        assert w[2] == Fraction(1, 48)
        assert w[4] == Fraction(-1, 5760)
        assert w[6] == Fraction(1, 362880)
        assert w[8] == Fraction(-1, 19353600)

    def test_bernoulli_oracle(self):
        sympy = pytest.importorskip("sympy")
        w = wheel_coefficients(8)
        for n in (1, 2, 3, 4):
            expected = Fraction(int(sympy.bernoulli(2 * n).p),
                                int(sympy.bernoulli(2 * n).q))
            expected /= 4 * n * factorial(2 * n)
            assert w[2 * n] == expected


class TestAttachment:
    def test_two_wheel_resolution(self):
        total = wheel_attachment_sum((2,))
        assert total == {ChordDiagram([(1, 1, 2, 2)]): Fraction(2),
                         ChordDiagram([(1, 2, 1, 2)]): Fraction(-2)}

    def test_elimination_order_confluence(self):
        for sizes in ((2,), (4,), (2, 2)):
            vertex_count = sum(sizes)
            cycle = tuple(range(vertex_count))
            reference = resolve_wheel_attachment(sizes, cycle)
            for order in itertools.permutations(range(vertex_count)):
                assert resolve_wheel_attachment(sizes, cycle, order) == reference

    def test_coefficient_sums_vanish(self):
        for sizes in ((2,), (4,), (2, 2)):
            by_degree: dict[int, Fraction] = {}
            for diagram, coeff in wheel_attachment_sum(sizes).items():
                key = diagram.degree
                by_degree[key] = by_degree.get(key, Fraction(0)) + coeff
            assert all(total == 0 for total in by_degree.values())

    def test_leg_cycle_validated(self):
        with pytest.raises(ValueError):
            resolve_wheel_attachment((2,), (0, 0))


# == 3. The unknot value =====================================================


class TestUnknotSeries:
    def test_frozen_degree_three_values(self):
        series = unknot_series_closed(3)
        assert series == {
            ChordDiagram([()]): Fraction(1),
            ChordDiagram([(1, 1, 2, 2)]): Fraction(1, 24),
            ChordDiagram([(1, 2, 1, 2)]): Fraction(-1, 24),
        }

    def test_even_series(self):
        series = unknot_series_closed(4)
        assert all(d.degree % 2 == 0 for d in series)
        assert len([d for d in series if d.degree == 4]) == 15

    def test_interval_cut_closes_back(self):
        for cutoff in (2, 3, 4):
            closed = interval_closure(unknot_series_interval(cutoff))
            assert closed == unknot_series_closed(cutoff)

    def test_sqrt_closes_to_unknot(self):
        for cutoff in (3, 4):
            root = sqrt_unknot_series(cutoff)
            squared = interval_product(root, root, cutoff)
            assert interval_closure(squared) == unknot_series_closed(cutoff)

    def test_truncation_cap(self):
        assert MAX_TRUNCATION == 4
        with pytest.raises(TruncationUnsupportedError):
            unknot_series_closed(5)
        with pytest.raises(TruncationUnsupportedError):
            sqrt_unknot_series(9)
