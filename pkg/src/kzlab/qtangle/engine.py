"""The truncated invariant engine: slice values, composition, integration.

Values of elementary tangles are chord series.  A crossing contributes
exp(g/2 * chord) where g is its geometric sign (crossing sign times the
two direction factors); every cup and cap contributes the interval square
root of the unknot series along its arc; an association contributes a
degree-3 truncation of a rational even associator, cabled over the leaves
of its three blocks with a sign per endpoint on an up-directed point.

Two value carriers live here.  TangleDiagramSum holds series on n labeled
parallel strands and supports stacking, cabling, and strand reversal; the
pentagon and hexagon checks run on it, and the hexagon (compared modulo
strand-level 4T relators) picks the associator sign at first use.

Word evaluation tracks, per monomial, one chord-endpoint sequence per
skeleton component, keyed canonically; the structure (trees, merges,
closures) is delegated to the words module.  evaluate_fragment runs any
slice range from a given boundary; graft stitches two fragment values at
a shared interface; integrate closes a full word into labeled circles.
"""

from __future__ import annotations

import itertools
from bisect import insort
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterator, Mapping, Sequence

from ..algebra import series_exp, sqrt_unknot_series
from ..diagrams import ChordDiagram, Mod4TForm, _eliminate, _matchings, reduce_mod_4t
from ..errors import TruncationUnsupportedError, WordValidationError
from .words import (
    AssocEvent, Birth, BoundaryState, CapEvent, CrossEvent, CupEvent, END,
    START, Slice, validate_word,
)

UP, DOWN = 1, -1

_FRESH = 1000  # inserted tokens start here; keys are renamed before storage


# -- Series on labeled parallel strands --------------------------------------


def _normalize_strand_key(seqs: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    names: dict[int, int] = {}
    out = []
    for seq in seqs:
        renamed = []
        for token in seq:
            if token not in names:
                names[token] = len(names) + 1
            renamed.append(names[token])
        out.append(tuple(renamed))
    return tuple(out)


def _key_degree(key: Sequence[Sequence[int]]) -> int:
    return sum(len(seq) for seq in key) // 2


def _stack_keys(lower: tuple[tuple[int, ...], ...],
                upper: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
    shift = max((t for seq in lower for t in seq), default=0)
    merged = [tuple(a) + tuple(t + shift for t in b) for a, b in zip(lower, upper)]
    return _normalize_strand_key(merged)


@dataclass(frozen=True)
class TangleDiagramSum:
    """Chord series on n labeled parallel strands.

    Keys list each strand's chord tokens in spatial order, bottom to top;
    every token occurs exactly twice overall.  directions holds +1 for an
    up strand and -1 for a down strand.
    """

    directions: tuple[int, ...]
    cutoff: int
    terms: dict[tuple[tuple[int, ...], ...], Fraction]

    @property
    def strands(self) -> int:
        return len(self.directions)

    def coefficient(self, key: tuple[tuple[int, ...], ...]) -> Fraction:
        return self.terms.get(_normalize_strand_key(key), Fraction(0))


def strand_identity(directions: Sequence[int], cutoff: int) -> TangleDiagramSum:
    empty = tuple(() for _ in directions)
    return TangleDiagramSum(tuple(directions), cutoff, {empty: Fraction(1)})


def chord_sum(directions: Sequence[int], pairs: Sequence[tuple[int, int]],
              cutoff: int, coeff: Fraction = Fraction(1)) -> TangleDiagramSum:
    """Sum of single-chord terms joining the given 1-based strand pairs."""
    terms: dict[tuple[tuple[int, ...], ...], Fraction] = {}
    for i, j in pairs:
        seqs = [[] for _ in directions]
        seqs[i - 1].append(1)
        seqs[j - 1].append(1)
        key = _normalize_strand_key(seqs)
        terms[key] = terms.get(key, Fraction(0)) + coeff
    return TangleDiagramSum(tuple(directions), cutoff, terms)


def stack(lower: TangleDiagramSum, upper: TangleDiagramSum) -> TangleDiagramSum:
    """Compose vertically: upper's chords land above lower's."""
    if lower.directions != upper.directions:
        raise ValueError("stacked series must share strand directions")
    cutoff = min(lower.cutoff, upper.cutoff)
    terms: dict[tuple[tuple[int, ...], ...], Fraction] = {}
    for ka, ca in lower.terms.items():
        for kb, cb in upper.terms.items():
            if _key_degree(ka) + _key_degree(kb) > cutoff:
                continue
            key = _stack_keys(ka, kb)
            new = terms.get(key, Fraction(0)) + ca * cb
            if new:
                terms[key] = new
            else:
                del terms[key]
    return TangleDiagramSum(lower.directions, cutoff, terms)


def exp_chords(directions: Sequence[int], weighted_pairs: Sequence[tuple[int, int, Fraction]],
               cutoff: int) -> TangleDiagramSum:
    """exp of a weighted sum of single chords, under stacking."""
    x: dict[tuple[tuple[int, ...], ...], Fraction] = {}
    for i, j, coeff in weighted_pairs:
        seqs = [[] for _ in directions]
        seqs[i - 1].append(1)
        seqs[j - 1].append(1)
        key = _normalize_strand_key(seqs)
        x[key] = x.get(key, Fraction(0)) + Fraction(coeff)
    unit = tuple(() for _ in directions)
    terms = series_exp(x, _stack_keys, unit, _key_degree, cutoff)
    return TangleDiagramSum(tuple(directions), cutoff, terms)


def cable(series: TangleDiagramSum, strand: int, copies: int) -> TangleDiagramSum:
    """Replace one strand by parallel copies, summing over endpoint lifts.

    Each chord endpoint on the cabled strand is sent to every copy; the
    order of endpoints along each copy is inherited from the original.
    """
    if copies < 1:
        raise ValueError("copies must be >= 1")
    if not 1 <= strand <= series.strands:
        raise ValueError(f"strand {strand} out of range 1..{series.strands}")
    s = strand - 1
    directions = (series.directions[:s]
                  + (series.directions[s],) * copies
                  + series.directions[s + 1:])
    terms: dict[tuple[tuple[int, ...], ...], Fraction] = {}
    for key, coeff in series.terms.items():
        cabled = key[s]
        for choice in itertools.product(range(copies), repeat=len(cabled)):
            lifted: list[tuple[int, ...]] = [
                tuple(t for t, c in zip(cabled, choice) if c == copy)
                for copy in range(copies)]
            new_key = _normalize_strand_key(key[:s] + tuple(lifted) + key[s + 1:])
            new = terms.get(new_key, Fraction(0)) + coeff
            if new:
                terms[new_key] = new
            else:
                del terms[new_key]
    return TangleDiagramSum(directions, series.cutoff, terms)


def reverse_strand(series: TangleDiagramSum, strand: int) -> TangleDiagramSum:
    """Reverse one strand's direction; each term picks up a sign per
    chord endpoint on that strand."""
    if not 1 <= strand <= series.strands:
        raise ValueError(f"strand {strand} out of range 1..{series.strands}")
    s = strand - 1
    directions = tuple(-d if i == s else d for i, d in enumerate(series.directions))
    terms = {key: coeff * (-1) ** len(key[s]) for key, coeff in series.terms.items()}
    return TangleDiagramSum(directions, series.cutoff, terms)


def permute_strands(series: TangleDiagramSum, perm: Sequence[int]) -> TangleDiagramSum:
    """Move strand i to position perm[i-1] (1-based bijection)."""
    n = series.strands
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"perm must be a permutation of 1..{n}")
    directions = [0] * n
    for old, new in enumerate(perm):
        directions[new - 1] = series.directions[old]
    terms: dict[tuple[tuple[int, ...], ...], Fraction] = {}
    for key, coeff in series.terms.items():
        seqs: list[tuple[int, ...]] = [()] * n
        for old, new in enumerate(perm):
            seqs[new - 1] = key[old]
        new_key = _normalize_strand_key(seqs)
        terms[new_key] = terms.get(new_key, Fraction(0)) + coeff
    return TangleDiagramSum(tuple(directions), series.cutoff, terms)


# -- 4T reduction on parallel strands ----------------------------------------


@lru_cache(maxsize=None)
def strand_monomials(n: int, k: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """All normalized placements of k chords on n labeled strands."""
    found: set[tuple[tuple[int, ...], ...]] = set()
    for cuts in itertools.combinations(range(2 * k + n - 1), n - 1):
        bounds = (-1,) + cuts + (2 * k + n - 1,)
        counts = [bounds[i + 1] - bounds[i] - 1 for i in range(n)]
        slot_strand = [i for i in range(n) for _ in range(counts[i])]
        for pairs in _matchings(2 * k):
            label = {}
            for t, (a, b) in enumerate(pairs, start=1):
                label[a] = label[b] = t
            seqs: list[list[int]] = [[] for _ in range(n)]
            for slot, strand in enumerate(slot_strand):
                seqs[strand].append(label[slot])
            found.add(_normalize_strand_key(seqs))
    return tuple(sorted(found))


@lru_cache(maxsize=None)
def _strand_reducer(n: int, k: int):
    """Echelon rows for the 4T span among degree-k strand monomials.

    Relators come from the same local move as on circles: an anchor chord,
    a fixed new endpoint at any gap, and the moving endpoint placed just
    before/after each anchor endpoint with signs +1, -1, -1, +1.  Strand
    words are linear, so end gaps are distinct.
    """
    basis = strand_monomials(n, k)
    index = {m: i for i, m in enumerate(basis)}
    rows: list[tuple[int, dict[int, Fraction]]] = []
    for base in strand_monomials(n, k - 1):
        ends: dict[int, list[tuple[int, int]]] = {}
        for strand, seq in enumerate(base):
            for p, token in enumerate(seq):
                ends.setdefault(token, []).append((strand, p))
        for (c1, p1), (c2, p2) in ends.values():
            for fc in range(n):
                for fg in range(len(base[fc]) + 1):
                    words = [list(seq) for seq in base]
                    words[fc].insert(fg, _FRESH)
                    q1 = p1 + 1 if (c1 == fc and p1 >= fg) else p1
                    q2 = p2 + 1 if (c2 == fc and p2 >= fg) else p2
                    vec: dict[int, Fraction] = {}
                    for mc, mg, sign in ((c1, q1, 1), (c1, q1 + 1, -1),
                                         (c2, q2 + 1, -1), (c2, q2, 1)):
                        placed = [list(w) for w in words]
                        placed[mc].insert(mg, _FRESH)
                        i = index[_normalize_strand_key(placed)]
                        new = vec.get(i, Fraction(0)) + sign
                        if new:
                            vec[i] = new
                        else:
                            del vec[i]
                    vec = _eliminate(vec, rows)
                    if vec:
                        pivot = min(vec)
                        inv = Fraction(1) / vec[pivot]
                        rows.append((pivot, {i: c * inv for i, c in vec.items()}))
                        rows.sort(key=lambda r: r[0])
    return basis, index, tuple(rows)


def reduce_strands_mod_4t(terms: Mapping[tuple[tuple[int, ...], ...], Fraction],
                          ) -> dict[tuple[tuple[int, ...], ...], Fraction]:
    """Canonical residual of a strand series modulo per-degree 4T spans."""
    residual: dict[tuple[tuple[int, ...], ...], Fraction] = {}
    by_degree: dict[int, dict] = {}
    for key, coeff in terms.items():
        if coeff:
            by_degree.setdefault(_key_degree(key), {})[key] = coeff
    for k, vec in by_degree.items():
        if k == 0:
            residual.update(vec)
            continue
        n = len(next(iter(vec)))
        basis, index, rows = _strand_reducer(n, k)
        reduced = _eliminate({index[m]: Fraction(c) for m, c in vec.items()}, rows)
        residual.update({basis[i]: c for i, c in reduced.items()})
    return residual


# -- The associator ----------------------------------------------------------

ASSOCIATOR_WEIGHT = Fraction(1, 24)


def _phi(directions: Sequence[int], a_pairs: Sequence[tuple[int, int]],
         b_pairs: Sequence[tuple[int, int]], sign: int,
         cutoff: int) -> TangleDiagramSum:
    """1 + sign/24 * (AB - BA) for chord sums A and B; exact through degree 3."""
    a = chord_sum(directions, a_pairs, cutoff)
    b = chord_sum(directions, b_pairs, cutoff)
    out = dict(strand_identity(directions, cutoff).terms)
    for series, factor in ((stack(a, b), 1), (stack(b, a), -1)):
        for key, coeff in series.terms.items():
            new = out.get(key, Fraction(0)) + sign * factor * ASSOCIATOR_WEIGHT * coeff
            if new:
                out[key] = new
            else:
                del out[key]
    return TangleDiagramSum(tuple(directions), cutoff, out)


def pentagon_identity(cutoff: int = 2, sign: int | None = None) -> bool:
    """Both ways around the pentagon agree on four parallel down strands."""
    if sign is None:
        sign = associator_sign()
    down = (DOWN,) * 4
    lhs = stack(_phi(down, [(1, 2)], [(2, 3), (2, 4)], sign, cutoff),
                _phi(down, [(1, 3), (2, 3)], [(3, 4)], sign, cutoff))
    rhs = stack(stack(_phi(down, [(2, 3)], [(3, 4)], sign, cutoff),
                      _phi(down, [(1, 2), (1, 3)], [(2, 4), (3, 4)], sign, cutoff)),
                _phi(down, [(1, 2)], [(2, 3)], sign, cutoff))
    diff: dict = dict(lhs.terms)
    for key, coeff in rhs.terms.items():
        new = diff.get(key, Fraction(0)) - coeff
        if new:
            diff[key] = new
        else:
            del diff[key]
    return not diff


def _hexagon_sides(eps: int, sign: int, cutoff: int,
                   ) -> tuple[TangleDiagramSum, TangleDiagramSum]:
    """Both composites of the hexagon on three down strands.

    Left run: associate, cross the first strand over the joined pair
    (a cabled crossing), associate again.  Right run: cross over the
    middle strand, associate, cross over the last.  Both runs end with
    the same strand arrangement.
    """
    down = (DOWN,) * 3
    half = Fraction(eps, 2)

    lhs = strand_identity(down, cutoff)
    lhs = stack(lhs, _phi(down, [(1, 2)], [(2, 3)], sign, cutoff))
    two = exp_chords((DOWN, DOWN), [(1, 2, half)], cutoff)
    lhs = stack(lhs, cable(two, 2, 2))
    lhs = permute_strands(lhs, (3, 1, 2))
    lhs = stack(lhs, _phi(down, [(1, 2)], [(2, 3)], sign, cutoff))

    rhs = strand_identity(down, cutoff)
    rhs = stack(rhs, exp_chords(down, [(1, 2, half)], cutoff))
    rhs = permute_strands(rhs, (2, 1, 3))
    rhs = stack(rhs, _phi(down, [(1, 2)], [(2, 3)], sign, cutoff))
    rhs = stack(rhs, exp_chords(down, [(2, 3, half)], cutoff))
    rhs = permute_strands(rhs, (1, 3, 2))
    return lhs, rhs


def hexagon_identity(eps: int = 1, sign: int | None = None,
                     cutoff: int = 2) -> bool:
    """Hexagon check modulo strand-level 4T, for either crossing sign."""
    if sign is None:
        sign = associator_sign()
    lhs, rhs = _hexagon_sides(eps, sign, cutoff)
    diff: dict = dict(lhs.terms)
    for key, coeff in rhs.terms.items():
        new = diff.get(key, Fraction(0)) - coeff
        if new:
            diff[key] = new
        else:
            del diff[key]
    return not reduce_strands_mod_4t(diff)


@lru_cache(maxsize=None)
def associator_sign() -> int:
    """The frozen sign of the degree-2 associator term, picked at build
    time as the unique choice passing the hexagon."""
    passing = [s for s in (1, -1) if hexagon_identity(eps=1, sign=s)]
    if len(passing) != 1:
        raise RuntimeError(f"hexagon fixes no unique associator sign: {passing}")
    return passing[0]


# -- Generator values --------------------------------------------------------


def max_truncation(slices: Sequence[Slice]) -> int:
    """Highest supported truncation: 3 with association slices, else 4."""
    return 3 if any(s.kind == "assoc" for s in slices) else 4


def _check_cutoff(slices: Sequence[Slice], cutoff: int) -> None:
    if cutoff < 0:
        raise ValueError("truncation degree must be nonnegative")
    limit = max_truncation(slices)
    if cutoff > limit:
        raise TruncationUnsupportedError(
            f"truncation degree {cutoff} exceeds the supported maximum {limit} "
            "for this word")


def generator_value(s: Slice, directions: Sequence[int], cutoff: int):
    """The local series of one elementary slice.

    Crossings and associations return a TangleDiagramSum on their operand
    strands (two for x, three single-leaf blocks for assoc); cups and caps
    return the interval word series carried by their arc.  Up operands are
    produced from the all-down value by strand reversal.
    """
    if s.kind == "i":
        return strand_identity(directions, cutoff)
    if s.kind == "x":
        if len(directions) != 2:
            raise ValueError("a crossing acts on two strands")
        g = s.sign * directions[0] * directions[1]
        return exp_chords(directions, [(1, 2, Fraction(g, 2))], cutoff)
    if s.kind == "assoc":
        if len(directions) != 3:
            raise ValueError("an association acts on three blocks")
        _check_cutoff([s], cutoff)
        value = _phi((DOWN,) * 3, [(1, 2)], [(2, 3)],
                     s.sign * associator_sign(), cutoff)
        for i, d in enumerate(directions, start=1):
            if d == UP:
                value = reverse_strand(value, i)
        return value
    if s.kind in ("cup", "cap"):
        series = sqrt_unknot_series(cutoff)
        if s.primed:
            series = {tuple(reversed(word)): coeff for word, coeff in series.items()}
        return dict(series)
    raise ValueError(f"unknown generator kind {s.kind!r}")


# -- Word evaluation ---------------------------------------------------------


Key = tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]


def _normalize_key(open_seqs: Sequence[Sequence[int]],
                   closed_seqs: Sequence[Sequence[int]]) -> Key:
    names: dict[int, int] = {}

    def rename(seqs: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
        out = []
        for seq in seqs:
            renamed = []
            for token in seq:
                if token not in names:
                    names[token] = len(names) + 1
                renamed.append(names[token])
            out.append(tuple(renamed))
        return tuple(out)

    return (rename(open_seqs), rename(closed_seqs))


def _insert_at_point(seq: tuple[int, ...], role: str,
                     tokens: Sequence[int]) -> tuple[int, ...]:
    """Add chord endpoints at a component's boundary point.

    tokens are listed bottom to top.  At an end point the walk meets the
    lowest token first, so they append in order; at a start point the walk
    leaves through the topmost token first, so they prepend reversed.
    """
    if role == END:
        return seq + tuple(tokens)
    return tuple(reversed(tokens)) + seq


@dataclass(frozen=True)
class FragmentValue:
    """Value of a slice range: per-component chord words, ready to graft.

    Components are identified by birth keys; anchors map a component to
    the positions it holds on the fragment's lower interface, and members
    lists the cup-born keys merged into it (for rebirth after grafting).
    """

    cutoff: int
    spec_in: tuple
    spec_out: tuple
    leaves: tuple[tuple[Birth, str], ...]
    anchors: dict[Birth, tuple[int, ...]]
    members: dict[Birth, tuple[Birth, ...]]
    open_order: tuple[Birth, ...]
    closed_order: tuple[Birth, ...]
    terms: dict[Key, Fraction]


def evaluate_fragment(slices: Sequence[Slice], cutoff: int,
                      initial: tuple | None = None,
                      slice_offset: int = 0) -> FragmentValue:
    """Evaluate consecutive slices from a boundary (empty by default)."""
    _check_cutoff(slices, cutoff)
    state = BoundaryState() if initial is None else BoundaryState.from_spec(initial)
    spec_in = state.spec()
    open_order: list[Birth] = list(state.open_components())
    closed_order: list[Birth] = []
    terms: dict[Key, Fraction] = {
        (tuple(() for _ in open_order), ()): Fraction(1)}
    sqrt_series = sqrt_unknot_series(cutoff)

    def reroot(new_terms: dict[Key, Fraction], open_seqs, closed_seqs,
               coeff: Fraction) -> None:
        if sum(len(s) for s in open_seqs) + sum(len(s) for s in closed_seqs) > 2 * cutoff:
            return
        key = _normalize_key(open_seqs, closed_seqs)
        new = new_terms.get(key, Fraction(0)) + coeff
        if new:
            new_terms[key] = new
        else:
            del new_terms[key]

    for local, s in enumerate(slices):
        event = state.apply(s, slice_offset + local)
        if isinstance(event, CupEvent):
            idx = len([b for b in open_order if b < event.component])
            open_order.insert(idx, event.component)
            arcs = [(tuple(reversed(word)) if s.primed else word, coeff)
                    for word, coeff in sqrt_series.items()]
            new_terms: dict[Key, Fraction] = {}
            for (open_seqs, closed_seqs), coeff in terms.items():
                for word, c in arcs:
                    fresh = tuple(_FRESH + t for t in word)
                    seqs = open_seqs[:idx] + (fresh,) + open_seqs[idx:]
                    reroot(new_terms, seqs, closed_seqs, coeff * c)
            terms = new_terms
        elif isinstance(event, CapEvent):
            arcs = [(tuple(reversed(word)) if s.primed else word, coeff)
                    for word, coeff in sqrt_series.items()]
            new_terms = {}
            if event.closes:
                i = open_order.index(event.merged)
                open_order.pop(i)
                pos = len([b for b in closed_order if b < event.merged])
                closed_order.insert(pos, event.merged)
                for (open_seqs, closed_seqs), coeff in terms.items():
                    for word, c in arcs:
                        fresh = tuple(_FRESH + t for t in word)
                        circle = open_seqs[i] + fresh
                        seqs = open_seqs[:i] + open_seqs[i + 1:]
                        closed = (closed_seqs[:pos] + (circle,) + closed_seqs[pos:])
                        reroot(new_terms, seqs, closed, coeff * c)
            else:
                ia = open_order.index(event.ending)
                ib = open_order.index(event.starting)
                for b in sorted((ia, ib), reverse=True):
                    open_order.pop(b)
                idx = len([b for b in open_order if b < event.merged])
                open_order.insert(idx, event.merged)
                for (open_seqs, closed_seqs), coeff in terms.items():
                    for word, c in arcs:
                        fresh = tuple(_FRESH + t for t in word)
                        joined = open_seqs[ia] + fresh + open_seqs[ib]
                        rest = [q for i, q in enumerate(open_seqs)
                                if i not in (ia, ib)]
                        rest.insert(idx, joined)
                        reroot(new_terms, rest, closed_seqs, coeff * c)
            terms = new_terms
        elif isinstance(event, CrossEvent):
            (cl, role_l), (cr, role_r) = event.left, event.right
            il, ir = open_order.index(cl), open_order.index(cr)
            g = event.geometric_sign
            override = _CROSSING_OVERRIDE.get(slice_offset + local)
            new_terms = {}
            for (open_seqs, closed_seqs), coeff in terms.items():
                ks = range(cutoff + 1) if override is None else (override,)
                for k in ks:
                    rungs = tuple(_FRESH + t for t in range(k))
                    factor = (Fraction(1) if override is not None
                              else Fraction(g) ** k / (2 ** k * factorial(k)))
                    seqs = list(open_seqs)
                    seqs[il] = _insert_at_point(seqs[il], role_l, rungs)
                    seqs[ir] = _insert_at_point(seqs[ir], role_r, rungs)
                    reroot(new_terms, seqs, closed_seqs, coeff * factor)
            terms = new_terms
        elif isinstance(event, AssocEvent):
            sigma = event.sign * associator_sign()
            x_block, y_block, z_block = event.blocks
            lifts: list[tuple[Fraction, dict[int, list[int]]]] = []
            for first, second, monomial_sign in (
                    ((x_block, y_block), (y_block, z_block), 1),
                    ((y_block, z_block), (x_block, y_block), -1)):
                for e1a, e1b in itertools.product(first[0], first[1]):
                    for e2a, e2b in itertools.product(second[0], second[1]):
                        by_leaf: dict[int, list[int]] = {}
                        orient = 1
                        for level, (ea, eb) in enumerate(((e1a, e1b), (e2a, e2b))):
                            for pos, _, role in (ea, eb):
                                by_leaf.setdefault(pos, []).append(_FRESH + level)
                                if role == END:
                                    orient = -orient
                        coeff = sigma * monomial_sign * ASSOCIATOR_WEIGHT * orient
                        lifts.append((coeff, by_leaf))
            leaf_comp = {pos: (comp, role) for block in event.blocks
                         for pos, comp, role in block}
            new_terms = {}
            for (open_seqs, closed_seqs), coeff in terms.items():
                reroot(new_terms, open_seqs, closed_seqs, coeff)
                for factor, by_leaf in lifts:
                    seqs = list(open_seqs)
                    for pos, tokens in by_leaf.items():
                        comp, role = leaf_comp[pos]
                        i = open_order.index(comp)
                        seqs[i] = _insert_at_point(seqs[i], role, tokens)
                    reroot(new_terms, seqs, closed_seqs, coeff * factor)
            terms = new_terms
        # identity slices change nothing

    members = {
        comp: tuple(sorted(b for b in state._parent
                           if state.find(b) == comp and b[0] == 1))
        for comp in open_order}
    return FragmentValue(
        cutoff=cutoff,
        spec_in=spec_in,
        spec_out=state.spec(),
        leaves=state.leaf_summary(),
        anchors={comp: state.anchors.get(comp, ()) for comp in open_order},
        members=members,
        open_order=tuple(open_order),
        closed_order=tuple(closed_order),
        terms=terms,
    )


_CROSSING_OVERRIDE: dict[int, int] = {}


def graft(lower: FragmentValue, upper: FragmentValue) -> FragmentValue:
    """Stitch an upper fragment onto a lower one at a shared interface.

    The lower fragment's top boundary must match the upper fragment's
    initial spec (shape and directions).  Components are joined along the
    interface; chains may stay open, and a closed loop of stitches turns
    into a circle.
    """
    if lower.cutoff != upper.cutoff:
        raise ValueError("fragments must share a truncation degree")
    if lower.spec_out != upper.spec_in:
        raise WordValidationError("fragment boundaries do not match")
    cutoff = lower.cutoff

    anchored_at: dict[int, Birth] = {}
    for comp, positions in upper.anchors.items():
        for pos in positions:
            anchored_at[pos] = comp

    # Follow orientation across each stitch: at an up interface point the
    # lower component's end feeds the upper component's start; at a down
    # point the flow is upper to lower.
    successor: dict[tuple[str, Birth], tuple[str, Birth]] = {}
    for pos, (lc, role) in enumerate(lower.leaves, start=1):
        uc = anchored_at[pos]
        if role == END:
            successor[("L", lc)] = ("U", uc)
        else:
            successor[("U", uc)] = ("L", lc)

    lower_nodes = [("L", b) for b in lower.open_order]
    upper_nodes = [("U", b) for b in upper.open_order]
    has_pred = set(successor.values())

    paths: list[list[tuple[str, Birth]]] = []
    cycles: list[list[tuple[str, Birth]]] = []
    visited: set[tuple[str, Birth]] = set()
    for node in lower_nodes + upper_nodes:
        if node in visited or node in has_pred:
            continue
        chain = [node]
        visited.add(node)
        while chain[-1] in successor:
            chain.append(successor[chain[-1]])
            visited.add(chain[-1])
        paths.append(chain)
    for node in sorted(set(lower_nodes + upper_nodes) - visited):
        if node in visited:
            continue
        cycle = [node]
        visited.add(node)
        nxt = successor[node]
        while nxt != node:
            cycle.append(nxt)
            visited.add(nxt)
            nxt = successor[nxt]
        cycles.append(cycle)

    def birth_of(anchors: tuple[int, ...], member_births: list[Birth]) -> Birth:
        if anchors:
            return (0, 0, min(anchors))
        return min(member_births)

    assembled: list[tuple[Birth, list[tuple[str, Birth]], tuple[int, ...],
                          tuple[Birth, ...]]] = []
    for chain in paths:
        anchors: list[int] = []
        member_births: list[Birth] = []
        for side, b in chain:
            if side == "L":
                anchors.extend(lower.anchors.get(b, ()))
                member_births.extend(lower.members.get(b, ()))
                if not lower.anchors.get(b) and not lower.members.get(b):
                    member_births.append(b)
            else:
                member_births.extend(upper.members.get(b, ()))
        birth = birth_of(tuple(anchors), member_births)
        assembled.append((birth, chain, tuple(sorted(anchors)),
                          tuple(sorted(member_births))))
    cycle_entries: list[tuple[Birth, list[tuple[str, Birth]]]] = []
    for cycle in cycles:
        member_births = []
        for side, b in cycle:
            source = lower if side == "L" else upper
            member_births.extend(source.members.get(b, ()))
        start = cycle.index(min(cycle, key=lambda node: node[1]))
        cycle_entries.append((min(member_births), cycle[start:] + cycle[:start]))

    open_order = tuple(sorted(entry[0] for entry in assembled))
    order_of = {entry[0]: entry for entry in assembled}
    closed_births = (list(lower.closed_order) + list(upper.closed_order)
                     + [b for b, _ in cycle_entries])
    closed_order = tuple(sorted(closed_births))
    cycle_of = {b: chain for b, chain in cycle_entries}

    lower_index = {b: i for i, b in enumerate(lower.open_order)}
    upper_index = {b: i for i, b in enumerate(upper.open_order)}

    def seq_of(node: tuple[str, Birth], low_open, up_open) -> tuple[int, ...]:
        side, b = node
        if side == "L":
            return low_open[lower_index[b]]
        return tuple(t + _FRESH for t in up_open[upper_index[b]])

    terms: dict[Key, Fraction] = {}
    for (low_open, low_closed), c_low in lower.terms.items():
        for (up_open, up_closed), c_up in upper.terms.items():
            open_seqs = []
            for birth in open_order:
                _, chain, _, _ = order_of[birth]
                seq: tuple[int, ...] = ()
                for node in chain:
                    seq = seq + seq_of(node, low_open, up_open)
                open_seqs.append(seq)
            closed_map: dict[Birth, tuple[int, ...]] = {}
            for b, seq in zip(lower.closed_order, low_closed):
                closed_map[b] = seq
            for b, seq in zip(upper.closed_order, up_closed):
                closed_map[b] = tuple(t + _FRESH for t in seq)
            for b, chain in cycle_of.items():
                seq = ()
                for node in chain:
                    seq = seq + seq_of(node, low_open, up_open)
                closed_map[b] = seq
            closed_seqs = [closed_map[b] for b in closed_order]
            total = (sum(len(q) for q in open_seqs)
                     + sum(len(q) for q in closed_seqs))
            if total > 2 * cutoff:
                continue
            key = _normalize_key(open_seqs, closed_seqs)
            new = terms.get(key, Fraction(0)) + c_low * c_up
            if new:
                terms[key] = new
            else:
                del terms[key]

    anchors = {entry[0]: entry[2] for entry in assembled}
    members = {entry[0]: entry[3] for entry in assembled}
    return FragmentValue(
        cutoff=cutoff,
        spec_in=lower.spec_in,
        spec_out=upper.spec_out,
        leaves=_relabel_leaves(upper, assembled),
        anchors=anchors,
        members=members,
        open_order=open_order,
        closed_order=closed_order,
        terms=terms,
    )


def _relabel_leaves(upper: FragmentValue,
                    assembled) -> tuple[tuple[Birth, str], ...]:
    """Top boundary points of the graft, named by stitched components."""
    rebirth = {}
    for birth, chain, _, _ in assembled:
        for node in chain:
            rebirth[node] = birth
    return tuple((rebirth[("U", comp)], role) for comp, role in upper.leaves)


# -- Results -----------------------------------------------------------------


@dataclass(frozen=True)
class TangleResult:
    """Engine output for a closed word: a diagram series on m circles."""

    circles: int
    truncation: int
    coefficients: dict[ChordDiagram, Fraction]

    def coefficient(self, diagram: ChordDiagram) -> Fraction:
        return self.coefficients.get(diagram, Fraction(0))

    def degree_part(self, k: int) -> dict[ChordDiagram, Fraction]:
        return {d: c for d, c in self.coefficients.items() if d.degree == k}

    def reduced(self, k: int) -> Mod4TForm:
        return reduce_mod_4t(self.degree_part(k))

    def relabeled(self, perm: Sequence[int]) -> "TangleResult":
        out: dict[ChordDiagram, Fraction] = {}
        for diagram, coeff in self.coefficients.items():
            moved = diagram.relabel_circles(perm)
            out[moved] = out.get(moved, Fraction(0)) + coeff
        return TangleResult(self.circles, self.truncation, out)


def finalize(fragment: FragmentValue,
             relabel: Sequence[int] | None = None) -> TangleResult:
    """Close a fully evaluated fragment into labeled circles."""
    if fragment.spec_out[1] or any(fragment.anchors.values()) or fragment.open_order:
        raise WordValidationError("fragment is not a closed link")
    out: dict[ChordDiagram, Fraction] = {}
    for (open_seqs, closed_seqs), coeff in fragment.terms.items():
        diagram = ChordDiagram(list(closed_seqs))
        new = out.get(diagram, Fraction(0)) + coeff
        if new:
            out[diagram] = new
        else:
            del out[diagram]
    result = TangleResult(len(fragment.closed_order), fragment.cutoff, out)
    if relabel is not None:
        result = result.relabeled(tuple(relabel))
    return result


@lru_cache(maxsize=None)
def _integrate_cached(slices: tuple[Slice, ...], cutoff: int) -> TangleResult:
    validate_word(slices)
    return finalize(evaluate_fragment(slices, cutoff))


def integrate(slices: Sequence[Slice], cutoff: int,
              relabel: Sequence[int] | None = None) -> TangleResult:
    """The truncated invariant of a closed word, on birth-ordered circles."""
    result = _integrate_cached(tuple(slices), cutoff)
    if relabel is not None:
        result = result.relabeled(tuple(relabel))
    return result


def crossing_info(slices: Sequence[Slice], crossing: int) -> CrossEvent:
    """Replay the boundary to the designated 1-based slice; it must be a
    crossing.  The event carries components, roles, and the sign."""
    if not 1 <= crossing <= len(slices):
        raise WordValidationError(f"slice index {crossing} out of range")
    if slices[crossing - 1].kind != "x":
        raise WordValidationError(f"slice {crossing} is not a crossing")
    state = BoundaryState()
    event = None
    for index, s in enumerate(slices):
        got = state.apply(s, index)
        if index == crossing - 1:
            event = got
    assert isinstance(event, CrossEvent)
    return event


@lru_cache(maxsize=None)
def _crossing_term_cached(slices: tuple[Slice, ...], crossing: int, k: int,
                          cutoff: int) -> TangleResult:
    validate_word(slices)
    if slices[crossing - 1].kind != "x":
        raise WordValidationError(f"slice {crossing} is not a crossing")
    _CROSSING_OVERRIDE[crossing - 1] = k
    try:
        return finalize(evaluate_fragment(slices, cutoff))
    finally:
        del _CROSSING_OVERRIDE[crossing - 1]


def crossing_term(slices: Sequence[Slice], crossing: int, k: int,
                  cutoff: int) -> TangleResult:
    """Integrate with one crossing's series replaced by a bare k-chord
    block with coefficient 1 (k = 0 suppresses the crossing's chords)."""
    if k < 0:
        raise ValueError("chord count must be nonnegative")
    return _crossing_term_cached(tuple(slices), crossing, k, cutoff)
