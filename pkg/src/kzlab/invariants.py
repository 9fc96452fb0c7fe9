"""Linking functionals and the identities tying them to engine output.

The two sides of every check are built independently.  The left side is
a monomial in entries of the linking matrix, which the words module
computes by counting signed crossings.  The right side sums engine
coefficients over a family of chord diagrams, selected by type matrix or
by degree.  Each checker returns a VerificationReport holding both exact
rationals, so a failure is inspectable rather than a bare assertion.

The crossing-change checkers work on a designated positive crossing.
Replacing that crossing's local series by a bare k-chord block gives the
terms of a finite expansion of the invariant; the identities verified
here relate those terms across functionals, invert the expansion, and
match the whole variation against the linking oracle in closed form.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Mapping, Sequence

from .diagrams import (
    ChordDiagram, all_type_matrices, connected_sum, enumerate_by_degree,
    enumerate_by_matrix,
)
from .algebra import closed_connected_product, series_exp, unknot_series_closed
from .errors import TruncationUnsupportedError, WordValidationError
from .qtangle.corpus import load_corpus_word
from .qtangle.engine import (
    TangleResult, crossing_info, crossing_term, integrate,
)
from .qtangle.words import BoundaryState, CrossEvent, Slice, linking_matrix

Matrix = tuple[tuple[int, ...], ...]


def _as_matrix(S: Sequence[Sequence[int]]) -> Matrix:
    rows = tuple(tuple(int(x) for x in row) for row in S)
    m = len(rows)
    if any(len(row) != m for row in rows):
        raise ValueError("type matrix must be square")
    if any(x < 0 for row in rows for x in row):
        raise ValueError("type matrix entries must be nonnegative")
    if any(rows[i][j] != rows[j][i] for i in range(m) for j in range(m)):
        raise ValueError("type matrix must be symmetric")
    return rows


def matrix_degree(S: Sequence[Sequence[int]]) -> int:
    """Number of chords a type matrix calls for: each cell i <= j once."""
    rows = _as_matrix(S)
    return sum(rows[i][j] for i in range(len(rows)) for j in range(i, len(rows)))


def linking_monomial(linking: Sequence[Sequence[Fraction]],
                     S: Sequence[Sequence[int]]) -> Fraction:
    """Product over cells i <= j of lk_ij^s_ij / s_ij!; 1 for S = 0."""
    rows = _as_matrix(S)
    if len(linking) != len(rows):
        raise ValueError("linking matrix and type matrix sizes differ")
    out = Fraction(1)
    for i in range(len(rows)):
        for j in range(i, len(rows)):
            s = rows[i][j]
            if s:
                out *= Fraction(linking[i][j]) ** s / factorial(s)
    return out


def class_sum(value: TangleResult | Mapping[ChordDiagram, Fraction],
              S: Sequence[Sequence[int]]) -> Fraction:
    """Sum of coefficients over all diagrams with the given type matrix.

    Accepts either engine output (checked against its truncation) or any
    raw diagram-to-coefficient mapping, such as a 4T relator.
    """
    rows = _as_matrix(S)
    if isinstance(value, TangleResult):
        if matrix_degree(rows) > value.truncation:
            raise TruncationUnsupportedError(
                f"type matrix needs degree {matrix_degree(rows)} but the "
                f"series is truncated at {value.truncation}")
        if value.circles != len(rows):
            raise ValueError("type matrix size differs from circle count")
        coefficients: Mapping[ChordDiagram, Fraction] = value.coefficients
    else:
        coefficients = value
    total = Fraction(0)
    for diagram in enumerate_by_matrix(rows):
        total += coefficients.get(diagram, Fraction(0))
    return total


def degree_class_sum(value: TangleResult, k: int) -> Fraction:
    """Sum of all degree-k coefficients, over every type at once."""
    if k > value.truncation:
        raise TruncationUnsupportedError(
            f"degree {k} exceeds the series truncation {value.truncation}")
    total = Fraction(0)
    for diagram in enumerate_by_degree(value.circles, k):
        total += value.coefficients.get(diagram, Fraction(0))
    return total


# -- Reports -----------------------------------------------------------------


@dataclass(frozen=True)
class VerificationReport:
    """One exact identity check: both sides, a verdict, and timing."""

    word: str
    S: Matrix | None
    N: int
    lhs: Fraction
    rhs: Fraction
    passed: bool
    ms: int
    identity: str = ""
    k: int | None = None

    def as_dict(self) -> dict:
        out: dict = {
            "word": self.word,
            "S": [list(row) for row in self.S] if self.S is not None else None,
            "N": self.N,
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "pass": self.passed,
            "ms": self.ms,
        }
        if self.identity:
            out["identity"] = self.identity
        if self.k is not None:
            out["k"] = self.k
        return out

    def render(self) -> str:
        subject = (f"S={[list(r) for r in self.S]}" if self.S is not None
                   else f"k={self.k}")
        tag = f" [{self.identity}]" if self.identity else ""
        verdict = "pass" if self.passed else "FAIL"
        return (f"{self.word} {subject} N={self.N}{tag}: "
                f"{self.lhs} == {self.rhs} -> {verdict}")


def _report(word_id: str, S: Matrix | None, cutoff: int, lhs: Fraction,
            rhs: Fraction, started: float, identity: str = "",
            k: int | None = None) -> VerificationReport:
    ms = int(round((time.perf_counter() - started) * 1000))
    return VerificationReport(word_id, S, cutoff, lhs, rhs, lhs == rhs, ms,
                              identity, k)


# -- The main identity and its degree aggregate ------------------------------


def verify_theorem(word: Sequence[Slice], S: Sequence[Sequence[int]],
                   cutoff: int, word_id: str = "word",
                   relabel: Sequence[int] | None = None) -> VerificationReport:
    """Linking monomial versus the same-type class sum of the integral."""
    started = time.perf_counter()
    rows = _as_matrix(S)
    result = integrate(word, cutoff, relabel=relabel)
    oracle = linking_matrix(word)
    if relabel is not None:
        perm = tuple(relabel)
        m = len(oracle)
        moved = [[Fraction(0)] * m for _ in range(m)]
        for i in range(m):
            for j in range(m):
                moved[perm[i] - 1][perm[j] - 1] = oracle[i][j]
        oracle = tuple(tuple(row) for row in moved)
    lhs = linking_monomial(oracle, rows)
    rhs = class_sum(result, rows)
    return _report(word_id, rows, cutoff, lhs, rhs, started)


def degree_sum_identity(word: Sequence[Slice], k: int, cutoff: int,
                        word_id: str = "word") -> VerificationReport:
    """Sum of all linking monomials of degree k versus the engine's total
    degree-k coefficient sum."""
    started = time.perf_counter()
    result = integrate(word, cutoff)
    oracle = linking_matrix(word)
    lhs = sum((linking_monomial(oracle, S)
               for S in all_type_matrices(result.circles, k)), Fraction(0))
    rhs = degree_class_sum(result, k)
    return _report(word_id, None, cutoff, lhs, rhs, started, k=k)


# -- Crossing-change identities ----------------------------------------------


def recursion_term(word: Sequence[Slice], crossing: int, k: int,
                   cutoff: int) -> TangleResult:
    """Integrate with the designated crossing replaced by a bare k-chord
    block of coefficient 1."""
    return crossing_term(word, crossing, k, cutoff)


def flip_crossing(word: Sequence[Slice], crossing: int) -> tuple[Slice, ...]:
    """The same word with the designated crossing's sign reversed."""
    flipped = list(word)
    s = flipped[crossing - 1]
    if s.kind != "x":
        raise WordValidationError(f"slice {crossing} is not a crossing")
    flipped[crossing - 1] = Slice(s.kind, s.pos, -s.sign, s.primed)
    return tuple(flipped)


def crossing_circles(word: Sequence[Slice], crossing: int) -> tuple[int, int]:
    """Final circle labels (a <= b) of the two strands at a crossing."""
    state = BoundaryState()
    event = None
    for index, s in enumerate(word):
        got = state.apply(s, index)
        if index == crossing - 1:
            event = got
    if not isinstance(event, CrossEvent):
        raise WordValidationError(f"slice {crossing} is not a crossing")
    labels = {birth: i for i, birth in enumerate(sorted(state.closed), start=1)}
    a = labels[state.find(event.left[0])]
    b = labels[state.find(event.right[0])]
    return (a, b) if a <= b else (b, a)


def _with_entry(S: Matrix, a: int, b: int, value: int) -> Matrix:
    rows = [list(row) for row in S]
    rows[a - 1][b - 1] = value
    rows[b - 1][a - 1] = value
    return tuple(tuple(row) for row in rows)


def check_recursion(word: Sequence[Slice], crossing: int,
                    S: Sequence[Sequence[int]], cutoff: int,
                    word_id: str = "word") -> list[VerificationReport]:
    """Verify the crossing-change expansion at one positive crossing.

    Three families of reports come back.  The variation series expresses
    the class-sum jump under the crossing change through the odd bare
    chord blocks.  The inversion identity recovers each smoothed value
    from the word's own class sums.  The oracle closed form checks the
    linking-side variation against its binomial expansion.
    """
    rows = _as_matrix(S)
    info = crossing_info(word, crossing)
    if info.geometric_sign != 1:
        raise WordValidationError(
            f"slice {crossing} must be a positive crossing "
            f"(geometric sign {info.geometric_sign})")
    a, b = crossing_circles(word, crossing)
    if len(rows) != len(linking_matrix(word)):
        raise ValueError("type matrix size differs from circle count")
    s = rows[a - 1][b - 1]
    flipped = flip_crossing(word, crossing)
    plus = integrate(word, cutoff)
    minus = integrate(flipped, cutoff)
    reports: list[VerificationReport] = []

    started = time.perf_counter()
    lhs = class_sum(plus, rows) - class_sum(minus, rows)
    rhs = Fraction(0)
    j = 0
    while 2 * j + 1 <= matrix_degree(rows):
        term = class_sum(crossing_term(word, crossing, 2 * j + 1, cutoff), rows)
        rhs += term / (factorial(2 * j + 1) * 4 ** j)
        j += 1
    reports.append(_report(word_id, rows, cutoff, lhs, rhs, started,
                           identity="variation-series"))

    for k in range(0, s + 1):
        started = time.perf_counter()
        lhs = class_sum(crossing_term(word, crossing, 0, cutoff),
                        _with_entry(rows, a, b, k))
        rhs = Fraction(0)
        for p in range(0, k + 1):
            rhs += (Fraction((-1) ** p, factorial(p) * 2 ** p)
                    * class_sum(plus, _with_entry(rows, a, b, k - p)))
        reports.append(_report(word_id, _with_entry(rows, a, b, k), cutoff,
                               lhs, rhs, started, identity="smoothing-inversion"))

    started = time.perf_counter()
    lk_plus = linking_matrix(word)
    lk_minus = linking_matrix(flipped)
    lhs = (linking_monomial(lk_plus, rows) - linking_monomial(lk_minus, rows))
    base = linking_monomial(lk_plus, _with_entry(rows, a, b, 0))
    ell = lk_plus[a - 1][b - 1]
    rhs = Fraction(0)
    for i in range(1, s + 1):
        rhs += (base * Fraction((-1) ** (i + 1), factorial(i) * factorial(s - i))
                * ell ** (s - i))
    reports.append(_report(word_id, rows, cutoff, lhs, rhs, started,
                           identity="oracle-variation"))
    return reports


def smoothing_shift_reports(word: Sequence[Slice], crossing: int,
                            S: Sequence[Sequence[int]], cutoff: int,
                            word_id: str = "word") -> list[VerificationReport]:
    """Bare-block class sums: shifting the designated entry absorbs the
    block's chords, and blocks larger than the entry contribute nothing."""
    rows = _as_matrix(S)
    a, b = crossing_circles(word, crossing)
    s = rows[a - 1][b - 1]
    degree = matrix_degree(rows)
    zero_block = crossing_term(word, crossing, 0, cutoff)
    reports = []
    for k in range(0, s + 1):
        started = time.perf_counter()
        lhs = class_sum(crossing_term(word, crossing, k, cutoff), rows)
        rhs = class_sum(zero_block, _with_entry(rows, a, b, s - k))
        reports.append(_report(word_id, rows, cutoff, lhs, rhs, started,
                               identity="block-shift", k=k))
    for k in range(s + 1, degree + 1):
        started = time.perf_counter()
        lhs = class_sum(crossing_term(word, crossing, k, cutoff), rows)
        reports.append(_report(word_id, rows, cutoff, lhs, Fraction(0),
                               started, identity="block-vanishing", k=k))
    return reports


def variation_match(word: Sequence[Slice], crossing: int,
                    S: Sequence[Sequence[int]], cutoff: int,
                    word_id: str = "word") -> VerificationReport:
    """Class-sum variation under a crossing change equals the linking
    monomial variation, both computed from scratch."""
    started = time.perf_counter()
    rows = _as_matrix(S)
    flipped = flip_crossing(word, crossing)
    lhs = (class_sum(integrate(word, cutoff), rows)
           - class_sum(integrate(flipped, cutoff), rows))
    rhs = (linking_monomial(linking_matrix(word), rows)
           - linking_monomial(linking_matrix(flipped), rows))
    return _report(word_id, rows, cutoff, lhs, rhs, started,
                   identity="variation-match")


# -- Unknot values by two routes ---------------------------------------------


def kinked_unknot_series(cutoff: int) -> dict[ChordDiagram, Fraction]:
    """Series of the once-kinked unknot built by surgery on the closed
    series: connected product of the plain unknot value with exp of a
    half-weighted single chord."""
    one_chord = ChordDiagram([(1, 1)])
    unit = ChordDiagram([()])
    twist = series_exp({one_chord: Fraction(1, 2)}, connected_sum, unit,
                       lambda d: d.degree, cutoff)
    return closed_connected_product(unknot_series_closed(cutoff), twist, cutoff)


def unknot_degree_value(k: int, framed: bool, cutoff: int) -> Fraction:
    """Engine-side degree-k coefficient sum for the unframed or the
    once-kinked unknot word."""
    word = load_corpus_word("u1" if framed else "u0")
    return degree_class_sum(integrate(word, cutoff), k)
