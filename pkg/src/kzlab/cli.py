"""Command-line surface: compute, verify, enumerate, selftest.

Every command reads a word from a file or the bundled corpus, runs in
exact rational arithmetic, and renders either human-readable text or
machine-readable JSON.  All numbers are emitted as integer-fraction
strings, and output ordering is canonical, so identical inputs give
byte-identical JSON apart from measured timings.

Exit codes: 0 all checks pass, 1 an identity failed, 2 input could not
be parsed or found, 3 a word or argument failed validation, 4 requested
truncation not supported.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .diagrams import ChordDiagram, enumerate_by_degree, enumerate_by_matrix
from .errors import (
    CorpusLookupError, KzlabError, TruncationUnsupportedError, WordParseError,
    WordValidationError,
)
from .invariants import (
    VerificationReport, check_recursion, degree_sum_identity, matrix_degree,
    verify_theorem,
)
from .qtangle.corpus import corpus_names, corpus_path, load_corpus_word
from .qtangle.engine import integrate
from .qtangle.words import Slice, parse_word
from .selftest import run_selftest, section_names
from .diagrams import all_type_matrices

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_VALIDATE = 3
EXIT_TRUNCATION = 4


@dataclass
class RunConfig:
    """Everything a command needs, resolved from flags."""

    command: str
    identity: str = ""
    word_path: str = ""
    corpus: str = ""
    degree: int = 3
    S: tuple[tuple[int, ...], ...] | None = None
    k: int | None = None
    all_S: bool = False
    max_degree: int = 3
    crossing: int | None = None
    relabel: tuple[int, ...] | None = None
    fmt: str = "text"
    circles: int = 1
    sections: tuple[str, ...] = ()
    as_json: bool = False


def _load_word(config: RunConfig) -> tuple[str, tuple[Slice, ...]]:
    if config.corpus:
        return config.corpus, load_corpus_word(config.corpus)
    try:
        text = open(config.word_path, encoding="utf-8").read()
    except OSError as exc:
        raise WordParseError(f"cannot read {config.word_path}: {exc}") from exc
    return config.word_path, parse_word(text)


def _parse_matrix(text: str) -> tuple[tuple[int, ...], ...]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WordParseError(f"--S is not valid JSON: {exc}") from exc
    if (not isinstance(data, list)
            or not all(isinstance(row, list) for row in data)):
        raise WordParseError("--S must be a JSON list of lists")
    return tuple(tuple(int(x) for x in row) for row in data)


def _parse_perm(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError as exc:
        raise WordParseError(f"--relabel must be integers: {text!r}") from exc


def _render_code(diagram: ChordDiagram) -> str:
    return " ".join("(" + " ".join(str(t) for t in word) + ")"
                    for word in diagram.code)


def _series_json(result) -> dict:
    terms = []
    for diagram in sorted(result.coefficients):
        coeff = result.coefficients[diagram]
        if coeff == 0:
            continue
        terms.append({"diagram": diagram.json_dict(), "coeff": str(coeff)})
    return {"circles": result.circles, "truncation": result.truncation,
            "terms": terms}


def _emit(payload) -> None:
    print(json.dumps(payload, indent=2))


def cmd_compute(config: RunConfig) -> int:
    word_id, word = _load_word(config)
    result = integrate(word, config.degree, relabel=config.relabel)
    if config.fmt == "json":
        _emit(_series_json(result))
        return EXIT_OK
    print(f"word: {word_id}")
    print(f"circles: {result.circles}  truncation: {result.truncation}")
    for k in range(result.truncation + 1):
        part = result.degree_part(k)
        total = sum(part.values(), Fraction(0))
        print(f"degree {k} (sum {total}):")
        for diagram in sorted(part):
            if part[diagram]:
                print(f"  {part[diagram]!s:>10}  {_render_code(diagram)}")
    return EXIT_OK


def _theorem_reports(config: RunConfig, word_id: str,
                     word: tuple[Slice, ...]) -> list[VerificationReport]:
    result = integrate(word, config.degree, relabel=config.relabel)
    if config.all_S:
        reports = []
        for k in range(config.max_degree + 1):
            for S in all_type_matrices(result.circles, k):
                reports.append(verify_theorem(word, S, config.degree, word_id,
                                              relabel=config.relabel))
        return reports
    if config.S is None:
        raise WordValidationError("verify theorem needs --S or --all-S")
    return [verify_theorem(word, config.S, config.degree, word_id,
                           relabel=config.relabel)]


def cmd_verify(config: RunConfig) -> int:
    word_id, word = _load_word(config)
    if config.identity == "theorem":
        reports = _theorem_reports(config, word_id, word)
    elif config.identity == "degree-sum":
        if config.k is None:
            raise WordValidationError("verify degree-sum needs --k")
        reports = [degree_sum_identity(word, config.k, config.degree, word_id)]
    elif config.identity == "recursion":
        if config.crossing is None:
            raise WordValidationError("verify recursion needs --crossing")
        if config.all_S:
            matrices = [S for k in range(config.max_degree + 1)
                        for S in all_type_matrices(_circle_count(word), k)]
        elif config.S is not None:
            matrices = [config.S]
        else:
            raise WordValidationError("verify recursion needs --S or --all-S")
        reports = []
        for S in matrices:
            reports.extend(check_recursion(word, config.crossing, S,
                                           config.degree, word_id))
    else:
        raise WordValidationError(f"unknown identity {config.identity!r}")
    if config.fmt == "json":
        _emit([r.as_dict() for r in reports])
    else:
        for r in reports:
            print(r.render())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAILED


def _circle_count(word: Sequence[Slice]) -> int:
    from .qtangle.words import linking_matrix

    return len(linking_matrix(word))


def cmd_enumerate(config: RunConfig) -> int:
    if config.S is not None:
        if len(config.S) != config.circles:
            raise WordValidationError("--S size must match --circles")
        diagrams = enumerate_by_matrix(config.S)
    elif config.k is not None:
        diagrams = enumerate_by_degree(config.circles, config.k)
    else:
        raise WordValidationError("enumerate needs --S or --k")
    if config.fmt == "json":
        _emit({"circles": config.circles, "count": len(diagrams),
               "diagrams": [d.json_dict() for d in diagrams]})
    else:
        for d in diagrams:
            print(_render_code(d))
        print(f"count: {len(diagrams)}")
    return EXIT_OK


def cmd_selftest(config: RunConfig) -> int:
    results = run_selftest(config.sections or None)
    ok = all(r.passed for r in results)
    if config.as_json:
        _emit({"pass": ok, "sections": [r.as_dict() for r in results]})
    else:
        for r in results:
            print(r.render())
        print("all sections pass" if ok else "FAILURES above")
    return EXIT_OK if ok else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kzlab",
        description="Exact truncated link invariants from q-tangle words.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_word_flags(p: argparse.ArgumentParser) -> None:
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--word", metavar="PATH", help="word file (.qtw)")
        group.add_argument("--corpus", metavar="NAME",
                           choices=corpus_names(),
                           help="bundled word: " + ", ".join(corpus_names()))

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--degree", type=int, default=3, metavar="N",
                       help="truncation degree (default 3)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--relabel", metavar="PERM",
                       help="circle relabeling, e.g. 2,1")

    p = sub.add_parser("compute", help="print the truncated invariant")
    add_word_flags(p)
    add_common(p)

    p = sub.add_parser("verify", help="check identities on one word")
    p.add_argument("identity", choices=("theorem", "degree-sum", "recursion"))
    add_word_flags(p)
    add_common(p)
    p.add_argument("--S", metavar="JSON", help="type matrix, e.g. [[0,1],[1,0]]")
    p.add_argument("--all-S", action="store_true", dest="all_S",
                   help="sweep every symmetric S up to --max-degree")
    p.add_argument("--max-degree", type=int, default=3, metavar="INT")
    p.add_argument("--k", type=int, metavar="INT", help="degree for degree-sum")
    p.add_argument("--crossing", type=int, metavar="INT",
                   help="1-based slice index of the designated crossing")

    p = sub.add_parser("enumerate", help="list chord diagrams")
    p.add_argument("--circles", type=int, default=1, metavar="INT")
    p.add_argument("--k", type=int, metavar="INT", help="chord count")
    p.add_argument("--S", metavar="JSON", help="type matrix")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("selftest", help="run the full identity sweep")
    p.add_argument("--section", action="append", default=[],
                   choices=section_names(), metavar="NAME",
                   help="run only the named section (repeatable)")
    p.add_argument("--json", action="store_true", dest="as_json")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    config = RunConfig(command=args.command)
    if args.command in ("compute", "verify"):
        config.word_path = args.word or ""
        config.corpus = args.corpus or ""
        config.degree = args.degree
        config.fmt = args.format
        if args.relabel:
            config.relabel = _parse_perm(args.relabel)
    if args.command == "verify":
        config.identity = args.identity
        config.S = _parse_matrix(args.S) if args.S else None
        config.all_S = args.all_S
        config.max_degree = args.max_degree
        config.k = args.k
        config.crossing = args.crossing
    if args.command == "enumerate":
        config.circles = args.circles
        config.k = args.k
        config.S = _parse_matrix(args.S) if args.S else None
        config.fmt = args.format
    if args.command == "selftest":
        config.sections = tuple(args.section)
        config.as_json = args.as_json
    return config


_COMMANDS = {
    "compute": cmd_compute,
    "verify": cmd_verify,
    "enumerate": cmd_enumerate,
    "selftest": cmd_selftest,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
        return _COMMANDS[args.command](config)
    except (WordParseError, CorpusLookupError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except TruncationUnsupportedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRUNCATION
    except (WordValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATE


if __name__ == "__main__":
    sys.exit(main())
