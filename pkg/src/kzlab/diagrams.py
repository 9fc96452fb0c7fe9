"""Chord diagrams on labeled oriented circles, with exact 4T reduction.

A chord diagram of degree k on m circles is a set of k chords, each chord
pairing two of the 2k marked points distributed over the circles.  Circles
are labeled 1..m and oriented; the marked points on a circle carry a cyclic
order but no basepoint.  Two diagrams are equal when rotating each circle's
point sequence makes their chord patterns identical.

A diagram is encoded as one tuple per circle listing chord ids in cyclic
order.  The canonical code is the lexicographically smallest encoding over
all per-circle rotations, with chord ids renamed 1, 2, ... in order of
first appearance (circle 1 scanned first).

The rational span of degree-k diagrams carries the standard four-term (4T)
relation.  This module enumerates diagrams by degree or by chord type
matrix, generates all 4T relators, and reduces vectors to a canonical
residual modulo the relator span using exact rational elimination.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence


Code = tuple[tuple[int, ...], ...]
Matrix = tuple[tuple[int, ...], ...]


def _relabel(words: Sequence[tuple[object, ...]]) -> Code:
    """Rename chord ids to 1, 2, ... by first appearance across all circles."""
    names: dict[object, int] = {}
    out = []
    for word in words:
        renamed = []
        for label in word:
            if label not in names:
                names[label] = len(names) + 1
            renamed.append(names[label])
        out.append(tuple(renamed))
    return tuple(out)


def canonical_code(words: Sequence[Sequence[object]]) -> Code:
    """Minimal relabeled code over all combinations of circle rotations."""
    fixed = [tuple(w) for w in words]
    rotations = [range(len(w)) if w else range(1) for w in fixed]
    best: Code | None = None
    for combo in itertools.product(*rotations):
        rotated = [w[r:] + w[:r] for w, r in zip(fixed, combo)]
        candidate = _relabel(rotated)
        if best is None or candidate < best:
            best = candidate
    assert best is not None
    return best


class ChordDiagram:
    """An equivalence class of chord diagrams, stored by canonical code.

    Chord labels in the input may be arbitrary hashables; each must occur
    exactly twice.  Empty circles are allowed and encoded as ().
    """

    __slots__ = ("code",)

    def __init__(self, words: Sequence[Sequence[object]]) -> None:
        counts: dict[object, int] = {}
        for word in words:
            for label in word:
                counts[label] = counts.get(label, 0) + 1
        bad = sorted(str(l) for l, c in counts.items() if c != 2)
        if bad:
            raise ValueError("chord labels must occur exactly twice: " + ", ".join(bad))
        self.code: Code = canonical_code(words)

    @property
    def circles(self) -> int:
        return len(self.code)

    @property
    def degree(self) -> int:
        return sum(len(w) for w in self.code) // 2

    def type_matrix(self) -> Matrix:
        """Symmetric matrix counting chords by the pair of circles they join.

        Entry (i, i) counts chords with both ends on circle i+1; entry
        (i, j) counts chords joining circles i+1 and j+1.
        """
        m = self.circles
        where: dict[int, list[int]] = {}
        for c, word in enumerate(self.code):
            for label in word:
                where.setdefault(label, []).append(c)
        counts = [[0] * m for _ in range(m)]
        for a, b in where.values():
            if a == b:
                counts[a][a] += 1
            else:
                counts[a][b] += 1
                counts[b][a] += 1
        return tuple(tuple(row) for row in counts)

    def relabel_circles(self, perm: Sequence[int]) -> "ChordDiagram":
        """Move circle i to position perm[i-1]; perm is a 1-based bijection."""
        m = self.circles
        if sorted(perm) != list(range(1, m + 1)):
            raise ValueError(f"perm must be a permutation of 1..{m}, got {perm!r}")
        words: list[tuple[int, ...]] = [()] * m
        for old, new in enumerate(perm):
            words[new - 1] = self.code[old]
        return ChordDiagram(words)

    def json_dict(self) -> dict:
        """Serialized form: chords as endpoint pairs [circle, slot] with
        1-based circles and 0-based slots along the canonical code."""
        ends: dict[int, list[list[int]]] = {}
        for c, word in enumerate(self.code, start=1):
            for pos, label in enumerate(word):
                ends.setdefault(label, []).append([c, pos])
        return {"circles": self.circles,
                "chords": [ends[label] for label in sorted(ends)]}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ChordDiagram) and self.code == other.code

    def __hash__(self) -> int:
        return hash(self.code)

    def __lt__(self, other: "ChordDiagram") -> bool:
        return (self.circles, self.degree, self.code) < (other.circles, other.degree, other.code)

    def __repr__(self) -> str:
        return f"ChordDiagram({[list(w) for w in self.code]!r})"


def disjoint_union(a: ChordDiagram, b: ChordDiagram) -> ChordDiagram:
    """Place b's circles after a's, keeping both chord sets."""
    shift = a.degree
    shifted = tuple(tuple(label + shift for label in word) for word in b.code)
    return ChordDiagram(a.code + shifted)


def connected_sum(a: ChordDiagram, b: ChordDiagram, circle: int = 1,
                  gap: int | None = None) -> ChordDiagram:
    """Splice the whole point sequence of one-circle b into a circle of a.

    The insertion point is the gap before slot index `gap` on the chosen
    circle (0 <= gap <= word length).  By default the splice lands after
    the first marked point, or at the only gap when the circle is bare.
    The result is independent of the insertion point modulo 4T.
    """
    if b.circles != 1:
        raise ValueError("second summand must have exactly one circle")
    if not 1 <= circle <= a.circles:
        raise ValueError(f"circle index {circle} out of range 1..{a.circles}")
    word = a.code[circle - 1]
    if gap is None:
        gap = 1 if word else 0
    if not 0 <= gap <= len(word):
        raise ValueError(f"gap index {gap} out of range 0..{len(word)}")
    shift = a.degree
    insert = tuple(label + shift for label in b.code[0])
    words = list(a.code)
    words[circle - 1] = word[:gap] + insert + word[gap:]
    return ChordDiagram(words)


# -- Enumeration -------------------------------------------------------------


def _matchings(n: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """All perfect matchings of 0..n-1 as sorted pair tuples (n even)."""
    if n == 0:
        yield ()
        return
    items = list(range(n))

    def rec(rest: list[int]) -> Iterator[tuple[tuple[int, int], ...]]:
        if not rest:
            yield ()
            return
        first, tail = rest[0], rest[1:]
        for i, partner in enumerate(tail):
            remaining = tail[:i] + tail[i + 1:]
            for sub in rec(remaining):
                yield ((first, partner),) + sub

    yield from rec(items)


@lru_cache(maxsize=None)
def enumerate_by_matrix(matrix: Matrix) -> tuple[ChordDiagram, ...]:
    """All diagrams whose type matrix equals the given symmetric matrix."""
    m = len(matrix)
    for i in range(m):
        if len(matrix[i]) != m:
            raise ValueError("type matrix must be square")
        for j in range(m):
            if matrix[i][j] != matrix[j][i] or matrix[i][j] < 0:
                raise ValueError("type matrix must be symmetric with natural entries")
    slot_counts = [2 * matrix[i][i] + sum(matrix[i][j] for j in range(m) if j != i)
                   for i in range(m)]
    slot_circle = [i for i in range(m) for _ in range(slot_counts[i])]
    found: set[ChordDiagram] = set()
    for pairs in _matchings(len(slot_circle)):
        induced = [[0] * m for _ in range(m)]
        for a, b in pairs:
            ca, cb = slot_circle[a], slot_circle[b]
            if ca == cb:
                induced[ca][ca] += 1
            else:
                induced[ca][cb] += 1
                induced[cb][ca] += 1
        if tuple(tuple(row) for row in induced) != matrix:
            continue
        slot_label = {}
        for t, (a, b) in enumerate(pairs, start=1):
            slot_label[a] = slot_label[b] = t
        words: list[list[int]] = [[] for _ in range(m)]
        for s, c in enumerate(slot_circle):
            words[c].append(slot_label[s])
        found.add(ChordDiagram(words))
    return tuple(sorted(found))


@lru_cache(maxsize=None)
def all_type_matrices(m: int, k: int) -> tuple[Matrix, ...]:
    """All symmetric natural m x m matrices with entry sum k over i <= j."""
    cells = [(i, i) for i in range(m)] + [(i, j) for i in range(m) for j in range(i + 1, m)]
    out = []
    for split in itertools.combinations(range(k + len(cells) - 1), len(cells) - 1):
        bounds = (-1,) + split + (k + len(cells) - 1,)
        values = [bounds[i + 1] - bounds[i] - 1 for i in range(len(cells))]
        rows = [[0] * m for _ in range(m)]
        for (i, j), v in zip(cells, values):
            rows[i][j] = rows[j][i] = v
        out.append(tuple(tuple(r) for r in rows))
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def enumerate_by_degree(m: int, k: int) -> tuple[ChordDiagram, ...]:
    """All degree-k diagrams on m labeled circles, sorted by code."""
    if m < 1 or k < 0:
        raise ValueError("need m >= 1 circles and degree k >= 0")
    found: list[ChordDiagram] = []
    for matrix in all_type_matrices(m, k):
        found.extend(enumerate_by_matrix(matrix))
    return tuple(sorted(found))


# -- The four-term relation --------------------------------------------------


class FourTRelator:
    """One 4T relator: four signed diagrams summing to zero in the quotient.

    Construction data: a degree k-1 diagram, an anchor chord in it, and a
    fixed attachment gap for one end of a new chord.  The four terms place
    the new chord's other end just before / just after each anchor
    endpoint, with signs +1, -1, -1, +1 in that traversal order.  The two
    placements at a common anchor endpoint share a type matrix, so any
    functional depending only on type matrices kills the relator.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Sequence[tuple[ChordDiagram, int]]) -> None:
        self.terms = tuple(terms)

    def combined(self) -> dict[ChordDiagram, int]:
        """Collect the four terms into a diagram -> coefficient vector."""
        vec: dict[ChordDiagram, int] = {}
        for diagram, sign in self.terms:
            vec[diagram] = vec.get(diagram, 0) + sign
        return {d: c for d, c in vec.items() if c}

    def __repr__(self) -> str:
        return f"FourTRelator({list(self.terms)!r})"


def _insert(words: list[tuple[object, ...]], circle: int, gap: int,
            label: object) -> list[tuple[object, ...]]:
    out = list(words)
    w = out[circle]
    out[circle] = w[:gap] + (label,) + w[gap:]
    return out


@lru_cache(maxsize=None)
def four_t_relators(m: int, k: int) -> tuple[FourTRelator, ...]:
    """All distinct 4T relators among degree-k diagrams on m circles."""
    if k < 2:
        return ()
    seen: set[tuple] = set()
    out: list[FourTRelator] = []
    for base in enumerate_by_degree(m, k - 1):
        anchors: dict[int, list[tuple[int, int]]] = {}
        for c, word in enumerate(base.code):
            for p, label in enumerate(word):
                anchors.setdefault(label, []).append((c, p))
        for ends in anchors.values():
            (c1, p1), (c2, p2) = ends
            for fc in range(m):
                for fg in range(max(1, len(base.code[fc]))):
                    words = _insert(list(base.code), fc, fg, "new")
                    # Anchor endpoints shift when the fixed end lands before them.
                    q1 = p1 + 1 if (c1 == fc and p1 >= fg) else p1
                    q2 = p2 + 1 if (c2 == fc and p2 >= fg) else p2
                    placements = [(c1, q1, 1), (c1, q1 + 1, -1),
                                  (c2, q2 + 1, -1), (c2, q2, 1)]
                    terms = []
                    for mc, mg, sign in placements:
                        terms.append((ChordDiagram(_insert(words, mc, mg, "new")), sign))
                    relator = FourTRelator(terms)
                    vec = relator.combined()
                    if not vec:
                        continue
                    signature = tuple(sorted((d.code, c) for d, c in vec.items()))
                    if signature in seen:
                        continue
                    seen.add(signature)
                    out.append(relator)
    return tuple(out)


# -- Reduction modulo 4T -----------------------------------------------------


def _eliminate(vec: dict[int, Fraction],
               rows: Sequence[tuple[int, dict[int, Fraction]]]) -> dict[int, Fraction]:
    """Subtract echelon rows (pivot = least index) to reach the normal form."""
    for pivot, row in rows:
        coeff = vec.get(pivot)
        if not coeff:
            continue
        for i, v in row.items():
            new = vec.get(i, Fraction(0)) - coeff * v
            if new:
                vec[i] = new
            else:
                vec.pop(i, None)
    return vec


@lru_cache(maxsize=None)
def _reducer(m: int, k: int) -> tuple[tuple[ChordDiagram, ...], dict[ChordDiagram, int],
                                      tuple[tuple[int, dict[int, Fraction]], ...]]:
    """Echelon rows spanning the 4T relator space in degree k on m circles."""
    basis = enumerate_by_degree(m, k)
    index = {d: i for i, d in enumerate(basis)}
    rows: list[tuple[int, dict[int, Fraction]]] = []
    for relator in four_t_relators(m, k):
        vec = {index[d]: Fraction(c) for d, c in relator.combined().items()}
        vec = _eliminate(vec, rows)
        if not vec:
            continue
        pivot = min(vec)
        inv = Fraction(1) / vec[pivot]
        rows.append((pivot, {i: c * inv for i, c in vec.items()}))
        rows.sort(key=lambda r: r[0])
    return basis, index, tuple(rows)


def quotient_dimension(m: int, k: int) -> int:
    """Dimension of degree-k diagrams on m circles modulo 4T."""
    basis, _, rows = _reducer(m, k)
    return len(basis) - len(rows)


class Mod4TForm:
    """Canonical residual of a rational diagram combination modulo 4T.

    Two combinations are equal in the quotient exactly when their residuals
    compare equal.  The residual is supported away from all relator pivots,
    which makes it unique within each coset.
    """

    __slots__ = ("items",)

    def __init__(self, items: Iterable[tuple[ChordDiagram, Fraction]]) -> None:
        kept = [(d, Fraction(c)) for d, c in items if c]
        kept.sort(key=lambda pair: pair[0].code)
        kept.sort(key=lambda pair: (pair[0].circles, pair[0].degree))
        self.items = tuple(kept)

    def as_dict(self) -> dict[ChordDiagram, Fraction]:
        return dict(self.items)

    @property
    def is_zero(self) -> bool:
        return not self.items

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Mod4TForm) and self.items == other.items

    def __hash__(self) -> int:
        return hash(self.items)

    def __repr__(self) -> str:
        return f"Mod4TForm({list(self.items)!r})"


def reduce_mod_4t(vector: Mapping[ChordDiagram, Fraction | int]) -> Mod4TForm:
    """Reduce each homogeneous component of a diagram combination mod 4T."""
    groups: dict[tuple[int, int], dict[ChordDiagram, Fraction]] = {}
    for diagram, coeff in vector.items():
        if coeff:
            key = (diagram.circles, diagram.degree)
            groups.setdefault(key, {})[diagram] = Fraction(coeff)
    residual: list[tuple[ChordDiagram, Fraction]] = []
    for (m, k), vec in groups.items():
        basis, index, rows = _reducer(m, k)
        reduced = _eliminate({index[d]: c for d, c in vec.items()}, rows)
        residual.extend((basis[i], c) for i, c in reduced.items())
    return Mod4TForm(residual)
