"""
Unit tests for canonical chord diagrams, enumeration, and the 4T quotient.

Core claims:
    - Canonicalization is idempotent and invariant under circle rotations
    - Chord labels must occur exactly twice; empty circles are fine
    - Type matrices count chords by endpoint circles, symmetrically
    - Degree lists on one circle have sizes 1, 1, 2, 5, 18 up to degree 4
    - Type families partition each degree list (m <= 3, k <= 4)
    - Every 4T relator has four terms with signs +1, -1, -1, +1 and
      pairwise-matching type matrices at each anchor endpoint
    - Relator vectors reduce to zero; the quotient dimensions on one
      circle are 1, 2, 3, 6 in degrees 1..4, matching a sympy rank oracle
    - Connected sums agree modulo 4T regardless of insertion point
    - Circle relabeling and disjoint union behave as stated
    - JSON serialization emits 1-based circles and 0-based slots
"""

import itertools
import random
from fractions import Fraction

import pytest

from kzlab.diagrams import (
    ChordDiagram,
    Mod4TForm,
    all_type_matrices,
    canonical_code,
    connected_sum,
    disjoint_union,
    enumerate_by_degree,
    enumerate_by_matrix,
    four_t_relators,
    quotient_dimension,
    reduce_mod_4t,
)


# -- Helpers -----------------------------------------------------------------


def _random_words(rng: random.Random, circles: int, degree: int):
    labels = list(range(1, degree + 1)) * 2
    rng.shuffle(labels)
    cuts = sorted(rng.randint(0, 2 * degree) for _ in range(circles - 1))
    bounds = [0] + cuts + [2 * degree]
    return [tuple(labels[bounds[i]:bounds[i + 1]]) for i in range(circles)]


def _rotate(word, by):
    if not word:
        return word
    by %= len(word)
    return word[by:] + word[:by]


# == 1. Canonical form =======================================================


class TestCanonicalForm:
    def test_idempotent_on_random_diagrams(self):
        rng = random.Random(20260823)
        for _ in range(1000):
            words = _random_words(rng, rng.randint(1, 3), rng.randint(0, 4))
            code = canonical_code(words)
            assert canonical_code(code) == code

    def test_rotation_invariance_all_rotations(self):
        rng = random.Random(7)
        for _ in range(300):
            words = _random_words(rng, rng.randint(1, 3), rng.randint(1, 4))
            base = ChordDiagram(words)
            sizes = [range(max(1, len(w))) for w in words]
            for shifts in itertools.product(*sizes):
                rotated = [_rotate(w, s) for w, s in zip(words, shifts)]
                assert ChordDiagram(rotated) == base

    def test_label_renaming_is_immaterial(self):
        a = ChordDiagram([("x", "y", "x", "y")])
        b = ChordDiagram([(9, 4, 9, 4)])
        assert a == b and hash(a) == hash(b)

    def test_labels_must_pair_up(self):
        with pytest.raises(ValueError, match="exactly twice"):
            ChordDiagram([(1, 1, 2)])
        with pytest.raises(ValueError, match="exactly twice"):
            ChordDiagram([(1, 2), (1, 2), (2,)])

    def test_empty_circles_allowed(self):
        d = ChordDiagram([(), (1, 1), ()])
        assert d.circles == 3 and d.degree == 1

    def test_circles_are_not_interchangeable(self):
        a = ChordDiagram([(1, 1), ()])
        b = ChordDiagram([(), (1, 1)])
        assert a != b


# == 2. Type matrices ========================================================


class TestTypeMatrix:
    def test_mixed_degree_three_example(self):
        d = ChordDiagram([(1, 1, 2), (2, 3, 3)])
        assert d.type_matrix() == ((1, 1), (1, 1))

    def test_symmetry_random(self):
        rng = random.Random(11)
        for _ in range(200):
            words = _random_words(rng, rng.randint(1, 3), rng.randint(0, 4))
            S = ChordDiagram(words).type_matrix()
            assert S == tuple(zip(*S))

    def test_degree_from_matrix(self):
        d = ChordDiagram([(1, 2, 1, 2), (3, 3)])
        S = d.type_matrix()
        assert sum(S[i][j] for i in range(2) for j in range(i, 2)) == d.degree


# == 3. Enumeration ==========================================================


class TestEnumeration:
    def test_one_circle_sizes(self):
        assert [len(enumerate_by_degree(1, k)) for k in range(5)] == [1, 1, 2, 5, 18]

    def test_two_circles_degree_one(self):
        family = enumerate_by_degree(2, 1)
        assert len(family) == 3
        types = sorted(d.type_matrix() for d in family)
        assert types == [((0, 0), (0, 1)), ((0, 1), (1, 0)), ((1, 0), (0, 0))]

    def test_matrix_family_matches_requested_type(self):
        for m in (1, 2, 3):
            for k in range(4):
                for S in all_type_matrices(m, k):
                    assert all(d.type_matrix() == S for d in enumerate_by_matrix(S))

    def test_families_partition_each_degree(self):
        for m in (1, 2, 3):
            for k in range(5):
                whole = set(enumerate_by_degree(m, k))
                pieces = [set(enumerate_by_matrix(S))
                          for S in all_type_matrices(m, k)]
                assert sum(len(p) for p in pieces) == len(whole)
                assert set().union(*pieces) == whole

    def test_deterministic_order(self):
        family = enumerate_by_degree(2, 2)
        assert list(family) == sorted(family)

    def test_single_pure_linking_diagram(self):
        assert len(enumerate_by_matrix(((0, 1), (1, 0)))) == 1


# == 4. 4T relators and the quotient =========================================


class TestFourTRelators:
    def test_counts(self):
        assert len(four_t_relators(1, 2)) == 0
        assert len(four_t_relators(2, 2)) == 0
        assert len(four_t_relators(1, 3)) == 4
        assert len(four_t_relators(2, 3)) == 16

    def test_term_structure(self):
        for relator in four_t_relators(1, 3) + four_t_relators(2, 3):
            assert [sign for _, sign in relator.terms] == [1, -1, -1, 1]
            diagrams = [d for d, _ in relator.terms]
            assert len({d.degree for d in diagrams}) == 1
            assert len({d.circles for d in diagrams}) == 1
            assert diagrams[0].type_matrix() == diagrams[1].type_matrix()
            assert diagrams[2].type_matrix() == diagrams[3].type_matrix()

    def test_coefficient_sum_vanishes(self):
        for relator in four_t_relators(2, 3):
            assert sum(relator.combined().values()) == 0

    def test_relators_reduce_to_zero(self):
        for m in (1, 2):
            for relator in four_t_relators(m, 3):
                assert reduce_mod_4t(relator.combined()).is_zero

    def test_one_circle_quotient_dimensions(self):
        assert [quotient_dimension(1, k) for k in range(1, 5)] == [1, 2, 3, 6]

    def test_two_circle_quotient_dimensions(self):
        assert [quotient_dimension(2, k) for k in range(1, 4)] == [3, 8, 19]

    def test_three_circle_quotient_dimensions(self):
        assert [quotient_dimension(3, k) for k in range(1, 4)] == [6, 24, 80]

    def test_quotient_dimension_against_sympy_rank(self):
        sympy = pytest.importorskip("sympy")
        for m, k in ((1, 2), (1, 3), (2, 2), (2, 3)):
            basis = enumerate_by_degree(m, k)
            index = {d: i for i, d in enumerate(basis)}
            rows = []
            for relator in four_t_relators(m, k):
                row = [0] * len(basis)
                for d, c in relator.combined().items():
                    row[index[d]] = c
                rows.append(row)
            rank = sympy.Matrix(rows).rank() if rows else 0
            assert quotient_dimension(m, k) == len(basis) - rank


class TestMod4TForm:
    def test_zero_drop_and_equality(self):
        d = ChordDiagram([(1, 1)])
        e = ChordDiagram([(1, 2, 1, 2)])
        assert Mod4TForm([(d, Fraction(0))]).is_zero
        assert Mod4TForm([(d, Fraction(1, 2)), (e, Fraction(0))]) == Mod4TForm(
            [(d, Fraction(1, 2))])

    def test_reduction_is_linear(self):
        rng = random.Random(3)
        basis = enumerate_by_degree(1, 3)
        for _ in range(50):
            u = {d: Fraction(rng.randint(-4, 4)) for d in basis}
            v = {d: Fraction(rng.randint(-4, 4)) for d in basis}
            both = {d: u[d] + v[d] for d in basis}
            lhs = reduce_mod_4t(both).as_dict()
            ru, rv = reduce_mod_4t(u).as_dict(), reduce_mod_4t(v).as_dict()
            rhs = {d: ru.get(d, 0) + rv.get(d, 0) for d in set(ru) | set(rv)}
            assert lhs == {d: c for d, c in rhs.items() if c}

    def test_residual_canonical_within_coset(self):
        relator = four_t_relators(1, 3)[0]
        d = ChordDiagram([(1, 2, 1, 3, 2, 3)])
        shifted = dict(relator.combined())
        shifted[d] = shifted.get(d, 0) + 1
        assert reduce_mod_4t(shifted) == reduce_mod_4t({d: 1})


# == 5. Products and serialization ===========================================


class TestProducts:
    def test_disjoint_union_keeps_sides(self):
        left = ChordDiagram([(1, 1)])
        right = ChordDiagram([(1, 2, 1, 2)])
        both = disjoint_union(left, right)
        assert both.circles == 2
        assert both.type_matrix() == ((1, 0), (0, 2))

    def test_connected_sum_insertion_independence_mod_4t(self):
        host = ChordDiagram([(1, 2, 1, 2)])
        insert = ChordDiagram([(1, 1)])
        values = {reduce_mod_4t({connected_sum(host, insert, gap=g): 1})
                  for g in range(4)}
        assert len(values) == 1

    def test_connected_sum_degree_adds(self):
        a = ChordDiagram([(1, 1, 2, 2)])
        b = ChordDiagram([(1, 1)])
        assert connected_sum(a, b).degree == 3

    def test_relabel_roundtrip(self):
        d = ChordDiagram([(1, 2, 1, 2), (3, 3)])
        moved = d.relabel_circles((2, 1))
        assert moved.type_matrix() == ((1, 0), (0, 2))
        assert moved.relabel_circles((2, 1)) == d
        with pytest.raises(ValueError):
            d.relabel_circles((1, 1))

    def test_json_shape(self):
        d = ChordDiagram([(1, 2), (1, 2)])
        payload = d.json_dict()
        assert payload["circles"] == 2
        assert payload["chords"] == [[[1, 0], [2, 0]], [[1, 1], [2, 1]]]
