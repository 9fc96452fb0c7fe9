"""
Unit tests for word parsing, boundary tracking, and the linking oracle.

Core claims:
    - The slice grammar parses both one-per-line and semicolon layouts,
      skips comments, and reports bad tokens with their line number
    - Parse and render round-trip every corpus word
    - Validation rejects out-of-range positions, caps and crossings on
      non-adjacent leaves, direction-mismatched caps, ambiguous or
      impossible rebracketings, and unclosed words
    - Crossing signs combine the slice sign with both strand directions
    - The signed crossing count reproduces every tabulated corpus
      linking matrix, with half-writhe diagonals
    - Boundary traces expose the shape and directions after each slice
"""

from fractions import Fraction

import pytest

from kzlab.errors import WordParseError, WordValidationError
from kzlab.qtangle.corpus import corpus_linking, corpus_names, load_corpus_word
from kzlab.qtangle.words import (
    BoundaryState,
    Slice,
    linking_matrix,
    parse_word,
    render_word,
    validate_word,
)


# -- Helpers -----------------------------------------------------------------


def _apply_all(text: str) -> BoundaryState:
    state = BoundaryState()
    for index, s in enumerate(parse_word(text)):
        state.apply(s, index)
    return state


# == 1. Parsing ==============================================================


class TestParsing:
    def test_layouts_agree(self):
        lines = "cup@1\ncap@1\n"
        semis = "cup@1 ; cap@1"
        assert parse_word(lines) == parse_word(semis)

    def test_comments_and_blanks_skipped(self):
        text = "# a circle\n\ncup@1  # born\ncap@1\n"
        assert parse_word(text) == (Slice("cup", 1), Slice("cap", 1))

    def test_every_generator_form(self):
        text = "cup@1 ; cup'@1 ; cap@1 ; cap'@1 ; x+@1 ; x-@2 ; assoc+@2 ; assoc-@2 ; i@1"
        kinds = [s.kind for s in parse_word(text)]
        assert kinds == ["cup", "cup", "cap", "cap", "x", "x", "assoc", "assoc", "i"]

    def test_bad_token_reports_line(self):
        with pytest.raises(WordParseError, match="line 2"):
            parse_word("cup@1\nswap@1\n")

    def test_bad_position_reports_line(self):
        with pytest.raises(WordParseError):
            parse_word("cup@0")
        with pytest.raises(WordParseError):
            parse_word("cup@x")

    def test_render_round_trip(self):
        for name in corpus_names():
            word = load_corpus_word(name)
            assert parse_word(render_word(word)) == word


# == 2. Validation ===========================================================


class TestValidation:
    def test_out_of_range_positions(self):
        with pytest.raises(WordValidationError, match="slice 2"):
            validate_word(parse_word("cup@1 ; cup@4 ; cap@1 ; cap@1"))

    def test_cap_needs_adjacent_pair(self):
        bad = "cup@1 ; cup@2 ; assoc-@2 ; assoc-@2 ; cap@2 ; cap@1 ; cap@1"
        with pytest.raises(WordValidationError):
            validate_word(parse_word(bad))

    def test_cap_direction_mismatch(self):
        with pytest.raises(WordValidationError, match="direction"):
            validate_word(parse_word("cup@1 ; cap'@1"))

    def test_crossing_needs_adjacent_pair(self):
        with pytest.raises(WordValidationError):
            validate_word(parse_word("cup@1 ; cup@3 ; x+@2 ; cap@3 ; cap@1"))

    def test_assoc_needs_matching_shape(self):
        with pytest.raises(WordValidationError):
            validate_word(parse_word("cup@1 ; assoc+@1 ; cap@1"))

    def test_unclosed_word_rejected(self):
        with pytest.raises(WordValidationError, match="open"):
            validate_word(parse_word("cup@1"))
        validate_word(parse_word("cup@1"), require_closed=False)

    def test_identity_checks_range_only(self):
        validate_word(parse_word("i@1 ; cup@1 ; i@2 ; cap@1"))
        with pytest.raises(WordValidationError):
            validate_word(parse_word("cup@1 ; i@3 ; cap@1"))

    def test_corpus_words_validate(self):
        for name in corpus_names():
            trace = validate_word(load_corpus_word(name))
            assert trace[0] == (None, ())
            assert trace[-1] == (None, ())


# == 3. Crossing signs and linking ===========================================


class TestLinking:
    def test_corpus_matrices(self):
        for name in corpus_names():
            assert linking_matrix(load_corpus_word(name)) == corpus_linking(name)

    def test_kink_gives_half_framing(self):
        assert linking_matrix(load_corpus_word("u1")) == ((Fraction(1, 2),),)

    def test_mirror_flips_every_entry(self):
        word = load_corpus_word("hopf+")
        mirrored = tuple(Slice(s.kind, s.pos, -s.sign, s.primed)
                         if s.kind == "x" else s for s in word)
        lk = linking_matrix(mirrored)
        assert lk == tuple(tuple(-x for x in row)
                           for row in linking_matrix(word))

    def test_geometric_sign_uses_directions(self):
        # On one up and one down strand a negative slice sign crosses
        # positively: the direction factors contribute -1.
        state = _apply_all("cup@1")
        event = state.apply(Slice("x", 1, sign=-1), 99)
        assert event.geometric_sign == 1

    def test_writhe_counts_self_crossings(self):
        trefoil = load_corpus_word("trefoil")
        assert linking_matrix(trefoil) == ((Fraction(3, 2),),)


# == 4. Boundary traces ======================================================


class TestBoundary:
    def test_cup_shapes(self):
        shape, roles = _apply_all("cup@1").spec()
        assert roles == ("start", "end")
        shape2, roles2 = _apply_all("cup'@1").spec()
        assert roles2 == ("end", "start")

    def test_nesting_positions(self):
        state = _apply_all("cup@1 ; cup@2")
        _, roles = state.spec()
        assert roles == ("start", "start", "end", "end")

    def test_trace_length(self):
        word = load_corpus_word("hopf+")
        trace = validate_word(word)
        assert len(trace) == len(word) + 1

    def test_closed_components_recorded(self):
        state = _apply_all("cup@1 ; cap@1 ; cup@1 ; cap@1")
        assert len(state.closed) == 2
        assert state.spec() == (None, ())
