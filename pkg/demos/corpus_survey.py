#!/usr/bin/env python3
"""Survey the bundled words: linking oracles against the engine.

For every corpus word this prints the hand-tabulated framed linking
matrix, the degree-1 coefficients the engine produces, and the main
identity at every type matrix of degree at most 2.  Everything is an
exact rational; any mismatch aborts with a nonzero exit.
"""

import sys
from fractions import Fraction

from kzlab.diagrams import ChordDiagram, all_type_matrices
from kzlab.invariants import verify_theorem
from kzlab.qtangle.corpus import corpus_linking, corpus_names, load_corpus_word
from kzlab.qtangle.engine import integrate
from kzlab.qtangle.words import linking_matrix, render_word


def matrix_text(rows):
    return "  ".join("[" + " ".join(str(x) for x in row) + "]" for row in rows)


def one_chord(m, a, b):
    ends = [[] for _ in range(m)]
    ends[a - 1].append(1)
    ends[b - 1].append(1)
    return ChordDiagram(tuple(tuple(e) for e in ends))


failures = 0

for name in corpus_names():
    word = load_corpus_word(name)
    oracle = corpus_linking(name)

    print(f"== {name} " + "=" * max(1, 60 - len(name)))
    print(f"word:    {render_word(word)}")
    print(f"linking: {matrix_text(oracle)}")

    # == 1. The crossing-count oracle must agree with the table ==============
    counted = linking_matrix(word)
    tag = "ok" if counted == oracle else "MISMATCH"
    print(f"counted: {matrix_text(counted)}  [{tag}]")
    failures += counted != oracle

    # == 2. Degree-1 coefficients are the linking-matrix entries =============
    result = integrate(word, 2)
    m = result.circles
    for a in range(1, m + 1):
        for b in range(a, m + 1):
            got = result.coefficient(one_chord(m, a, b))
            want = Fraction(oracle[a - 1][b - 1])
            if got != want:
                failures += 1
                print(f"  cell({a},{b}): got {got}, want {want}  MISMATCH")

    # == 3. The identity at every type of degree <= 2 ========================
    checks = 0
    for k in range(3):
        for S in all_type_matrices(m, k):
            report = verify_theorem(word, S, 2, word_id=name)
            checks += 1
            if not report.passed:
                failures += 1
                print(f"  {report.render()}")
    print(f"identity checks degree <= 2: {checks} pass")
    print()

print("corpus survey:", "all exact" if failures == 0 else f"{failures} FAILURES")
sys.exit(0 if failures == 0 else 1)
