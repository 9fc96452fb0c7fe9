"""Bundled example words and their independently tabulated linking data.

Each entry pairs a word file with the framed linking matrix of the link
it presents, computed by hand from the diagram.  The matrices serve as an
oracle: tests and the self-check compare them against both the crossing
count and the engine's degree-1 output.  Setting KZLAB_CORPUS_DIR points
the loader at a directory of replacement .qtw files with the same names.
"""

from __future__ import annotations

import os
from fractions import Fraction
from importlib import resources
from pathlib import Path

from ..errors import CorpusLookupError
from .words import Slice, parse_word

_ENV_DIR = "KZLAB_CORPUS_DIR"

_MANIFEST: dict[str, tuple[str, tuple[tuple[str, ...], ...]]] = {
    "u0": ("u0.qtw", (("0",),)),
    "u1": ("u1.qtw", (("1/2",),)),
    "hopf+": ("hopf+.qtw", (("0", "1"), ("1", "0"))),
    "hopf-": ("hopf-.qtw", (("0", "-1"), ("-1", "0"))),
    "hopf+alt": ("hopf+alt.qtw", (("0", "1"), ("1", "0"))),
    "trefoil": ("trefoil.qtw", (("3/2",),)),
    "chain2": ("chain2.qtw", (("0", "1"), ("1", "0"))),
    "chain3": ("chain3.qtw", (("0", "1", "0"), ("1", "0", "1"), ("0", "1", "0"))),
    "unlink2": ("unlink2.qtw", (("0", "0"), ("0", "0"))),
}


def corpus_names() -> tuple[str, ...]:
    return tuple(sorted(_MANIFEST))


def corpus_path(name: str) -> Path:
    """Filesystem path of a bundled word, honouring KZLAB_CORPUS_DIR."""
    try:
        filename, _ = _MANIFEST[name]
    except KeyError:
        raise CorpusLookupError(
            f"unknown corpus word {name!r}; known: {', '.join(corpus_names())}"
        ) from None
    override = os.environ.get(_ENV_DIR)
    if override:
        path = Path(override) / filename
    else:
        path = Path(str(resources.files(__package__) / "data" / filename))
    if not path.is_file():
        raise CorpusLookupError(f"corpus file not found: {path}")
    return path


def load_corpus_word(name: str) -> tuple[Slice, ...]:
    return parse_word(corpus_path(name).read_text(encoding="utf-8"))


def corpus_linking(name: str) -> tuple[tuple[Fraction, ...], ...]:
    """The tabulated framed linking matrix (diagonal holds framing/2)."""
    if name not in _MANIFEST:
        raise CorpusLookupError(
            f"unknown corpus word {name!r}; known: {', '.join(corpus_names())}")
    _, rows = _MANIFEST[name]
    return tuple(tuple(Fraction(x) for x in row) for row in rows)
