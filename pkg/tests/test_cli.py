"""
Command-line behaviour: output shapes, determinism, and exit codes.

Core claims:
    - compute emits the schema {"circles", "truncation", "terms"} and is
      byte-identical across runs
    - verify reports carry the schema keys and exit 0 on true identities
    - enumerate lists diagrams and ends text output with "count: n"
    - selftest runs named sections and emits {"pass", "sections"} JSON
    - exit codes: 2 for unreadable input or bad JSON, 3 for validation
      failures, 4 for unsupported truncation
    - KZLAB_CORPUS_DIR redirects the corpus loader
"""

import json
import subprocess
import sys

from kzlab.cli import main
from kzlab.qtangle.corpus import corpus_path


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# == 1. compute ==============================================================


class TestCompute:
    def test_json_schema_and_determinism(self, capsys):
        argv = ("compute", "--corpus", "hopf+", "--degree", "2",
                "--format", "json")
        code, first, _ = _run(capsys, *argv)
        assert code == 0
        data = json.loads(first)
        assert set(data) == {"circles", "truncation", "terms"}
        assert data["circles"] == 2 and data["truncation"] == 2
        term = data["terms"][0]
        assert set(term) == {"diagram", "coeff"}
        assert set(term["diagram"]) == {"circles", "chords"}
        code, second, _ = _run(capsys, *argv)
        assert code == 0 and second == first

    def test_text_lists_degrees(self, capsys):
        code, out, _ = _run(capsys, "compute", "--corpus", "u1",
                            "--degree", "2")
        assert code == 0
        assert "word: u1" in out
        assert "degree 1 (sum 1/2):" in out
        assert "(1 1)" in out

    def test_relabel_flag(self, capsys):
        code, plain, _ = _run(capsys, "compute", "--corpus", "chain2",
                              "--degree", "1", "--format", "json")
        code2, moved, _ = _run(capsys, "compute", "--corpus", "chain2",
                               "--degree", "1", "--format", "json",
                               "--relabel", "2,1")
        assert code == code2 == 0
        assert json.loads(plain) == json.loads(moved)


# == 2. verify ===============================================================


class TestVerify:
    def test_theorem_single_type(self, capsys):
        code, out, _ = _run(capsys, "verify", "theorem", "--corpus", "trefoil",
                            "--S", "[[1]]", "--degree", "2")
        assert code == 0
        assert "pass" in out and "3/2" in out

    def test_theorem_sweep_json_deterministic_up_to_ms(self, capsys):
        argv = ("verify", "theorem", "--corpus", "hopf+", "--all-S",
                "--max-degree", "2", "--degree", "2", "--format", "json")
        code, first, _ = _run(capsys, *argv)
        code2, second, _ = _run(capsys, *argv)
        assert code == code2 == 0

        def strip(text):
            reports = json.loads(text)
            assert all(set(r) == {"word", "S", "N", "lhs", "rhs", "pass", "ms"}
                       for r in reports)
            return [{k: v for k, v in r.items() if k != "ms"}
                    for r in reports]

        assert strip(first) == strip(second)

    def test_degree_sum(self, capsys):
        code, out, _ = _run(capsys, "verify", "degree-sum", "--corpus",
                            "hopf+", "--k", "2", "--degree", "2")
        assert code == 0 and "pass" in out

    def test_recursion(self, capsys):
        code, out, _ = _run(capsys, "verify", "recursion", "--corpus",
                            "hopf+", "--crossing", "4",
                            "--S", "[[0,1],[1,0]]", "--degree", "2")
        assert code == 0
        assert "variation-series" in out and "smoothing-inversion" in out

    def test_word_file_input(self, capsys, tmp_path):
        path = tmp_path / "mine.qtw"
        path.write_text("cup@1 ; x-@1 ; cap'@1\n", encoding="utf-8")
        code, out, _ = _run(capsys, "verify", "theorem", "--word", str(path),
                            "--S", "[[1]]", "--degree", "2")
        assert code == 0 and "1/2" in out


# == 3. enumerate and selftest ===============================================


class TestEnumerate:
    def test_text_count(self, capsys):
        code, out, _ = _run(capsys, "enumerate", "--circles", "1", "--k", "3")
        assert code == 0
        assert out.strip().splitlines()[-1] == "count: 5"

    def test_json_by_type(self, capsys):
        code, out, _ = _run(capsys, "enumerate", "--circles", "2",
                            "--S", "[[0,1],[1,0]]", "--format", "json")
        assert code == 0
        data = json.loads(out)
        assert data["count"] == 1
        assert data["diagrams"][0]["chords"] == [[[1, 0], [2, 0]]]


class TestSelftest:
    def test_named_section_json(self, capsys):
        code, out, _ = _run(capsys, "selftest", "--section", "pentagon",
                            "--json")
        assert code == 0
        data = json.loads(out)
        assert data["pass"] is True
        assert [s["section"] for s in data["sections"]] == ["pentagon"]
        assert all(s["pass"] for s in data["sections"])

    def test_text_verdict_line(self, capsys):
        code, out, _ = _run(capsys, "selftest", "--section", "enumeration")
        assert code == 0
        assert out.strip().splitlines()[-1] == "all sections pass"


# == 4. exit codes ===========================================================


class TestExitCodes:
    def test_unreadable_word_file(self, capsys):
        code, _, err = _run(capsys, "compute", "--word", "/no/such/file.qtw")
        assert code == 2 and "error:" in err

    def test_bad_type_matrix_json(self, capsys):
        code, _, err = _run(capsys, "verify", "theorem", "--corpus", "u0",
                            "--S", "[[oops")
        assert code == 2 and "error:" in err

    def test_enumerate_needs_a_selector(self, capsys):
        code, _, err = _run(capsys, "enumerate", "--circles", "1")
        assert code == 3 and "error:" in err

    def test_recursion_rejects_negative_crossing(self, capsys):
        code, _, err = _run(capsys, "verify", "recursion", "--corpus",
                            "hopf-", "--crossing", "4",
                            "--S", "[[0,1],[1,0]]", "--degree", "2")
        assert code == 3 and "error:" in err

    def test_bad_relabel_length(self, capsys):
        code, _, err = _run(capsys, "compute", "--corpus", "hopf+",
                            "--degree", "1", "--relabel", "1,2,3")
        assert code == 3 and "error:" in err

    def test_unsupported_truncation(self, capsys):
        code, _, err = _run(capsys, "compute", "--corpus", "hopf+",
                            "--degree", "9")
        assert code == 4 and "error:" in err

    def test_subprocess_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "kzlab.cli", "enumerate",
             "--circles", "1", "--k", "2"],
            capture_output=True, text=True)
        assert proc.returncode == 0
        assert proc.stdout.strip().splitlines()[-1] == "count: 2"
        bad = subprocess.run(
            [sys.executable, "-m", "kzlab.cli", "compute",
             "--corpus", "nope"],
            capture_output=True, text=True)
        assert bad.returncode == 2


# == 5. corpus override ======================================================


class TestCorpusOverride:
    def test_env_dir_redirects_lookup(self, capsys, tmp_path, monkeypatch):
        (tmp_path / "u0.qtw").write_text("cup@1 ; x-@1 ; cap'@1\n",
                                         encoding="utf-8")
        monkeypatch.setenv("KZLAB_CORPUS_DIR", str(tmp_path))
        assert corpus_path("u0") == tmp_path / "u0.qtw"
        code, out, _ = _run(capsys, "compute", "--corpus", "u0",
                            "--degree", "1")
        assert code == 0 and "degree 1 (sum 1/2):" in out

    def test_missing_override_file(self, tmp_path, monkeypatch):
        monkeypatch.setenv("KZLAB_CORPUS_DIR", str(tmp_path))
        import pytest
        from kzlab.errors import CorpusLookupError

        with pytest.raises(CorpusLookupError):
            corpus_path("trefoil")
