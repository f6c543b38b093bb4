import json

import pytest

from patmat.regex import ENGINE_KINDS
from patmat.zl import compress, save_container

from patmat_cli import main

ANANAS = b"ananasbananer"


@pytest.fixture(autouse=True)
def quiet_workspace(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("PATMAT_LOG_ENABLED", "false")
    for key in ("PATMAT_WORD_BITS", "PATMAT_THREADS", "PATMAT_TAU", "PATMAT_MICRO_SIZE"):
        monkeypatch.delenv(key, raising=False)


@pytest.fixture
def files(tmp_path):
    def write(name, data):
        path = tmp_path / name
        path.write_bytes(data.encode("utf-8") if isinstance(data, str) else data)
        return str(path)
    return write


@pytest.fixture
def ananas_pmzl(tmp_path):
    path = tmp_path / "ananas.pmzl"
    save_container(compress(ANANAS), str(path))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_no_arguments_prints_usage(capsys):
    code, out = run(capsys)
    assert code == 2
    assert "usage" in out.lower()


def test_unknown_option_is_usage_error(capsys):
    assert main(["ed", "a", "b", "--nope"]) == 2
    assert main(["agrep", "-k", "-1", "ab", "x"]) == 2


def test_zgrep_description_example(capsys, ananas_pmzl):
    assert run(capsys, "zgrep", "-k", "2", "base", ananas_pmzl) == (0, "6 7 8 9 10 12\n")
    assert run(capsys, "zg", "-k", "2", "--tau", "1", "base", ananas_pmzl) == (0, "6 7 8 9 10 12\n")


def test_zgrep_json_lines(capsys, ananas_pmzl):
    code, out = run(capsys, "--json", "zgrep", "-k", "2", "base", ananas_pmzl)
    assert code == 0
    assert json.loads(out) == {"cmd": "zgrep", "file": ananas_pmzl, "matches": [6, 7, 8, 9, 10, 12]}


def test_zgrep_errors(capsys, files, ananas_pmzl):
    bad = files("bad.pmzl", b"PMZL1\x63\x00\x00")
    assert main(["zgrep", "-k", "1", "ab", bad]) == 4
    assert main(["zgrep", "-k", "1", "ab", "missing.pmzl"]) == 3
    assert main(["zgrep", "-k", "4", "base", ananas_pmzl]) == 2
    assert run(capsys, "zgrep", "-k", "0", "xyz", ananas_pmzl) == (1, "\n")


def test_zregex_matches_regex(capsys, files, ananas_pmzl):
    plain = files("ananas.txt", ANANAS)
    assert run(capsys, "zregex", "a", ananas_pmzl) == (0, "1 3 5 8 10\n")
    for pattern in ("an(an)*", "(a|e)n", "b*"):
        assert run(capsys, "zregex", pattern, ananas_pmzl) == run(capsys, "regex", pattern, plain)
    assert run(capsys, "zregex", "--no-empty", "b*", ananas_pmzl) == (0, "7\n")


def test_regex_engines_agree(capsys, files):
    plain = files("ananas.txt", ANANAS)
    expected = (0, "1 3 5 8 10\n")
    for engine in ENGINE_KINDS + ("auto", "bitpar"):
        assert run(capsys, "regex", "--engine", engine, "a", plain) == expected
    assert run(capsys, "re", "a*", plain)[1].split()[:3] == ["0", "1", "2"]
    assert run(capsys, "regex", "--no-empty", "a*", plain)[1] == "1 3 5 8 10\n"


def test_regex_syntax_error(capsys, files):
    assert main(["regex", "(ab", files("q.txt", "ab")]) == 2
    assert main(["regex", "--engine", "turbo", "a", files("q.txt", "ab")]) == 2


def test_multiple_files_keep_input_order(capsys, files):
    paths = [files(f"q{i}.txt", "ab" * (i + 1)) for i in range(6)]
    code, out = run(capsys, "--threads", "3", "regex", "b", *paths)
    assert code == 0
    lines = out.splitlines()
    assert [line.split(":")[0] for line in lines] == paths
    assert lines[2] == f"{paths[2]}: 2 4 6"


def test_tree_distances(capsys, files):
    a = files("a.tree", "a(e(b,c),d)")
    b = files("b.tree", "a(b,f(c,d))")
    assert run(capsys, "tree-ed", a, b) == (0, "2\n")
    assert run(capsys, "ta", "--unit", a, b) == (0, "4\n")
    costs = files("costs.txt", "# relabel is cheap\na b 0.5\na - 1\nb - 1\n")
    assert run(capsys, "tree-ed", "--costs", costs, files("x.tree", "a"), files("y.tree", "b")) == (0, "0.5\n")
    skewed = files("skewed.txt", "a b 5\na - 1\nb - 1\n")
    assert main(["tree-ed", "--costs", skewed, files("x.tree", "a"), files("y.tree", "b")]) == 2


def test_tree_distance_errors(capsys, files):
    good = files("good.tree", "a(b)")
    assert main(["tree-ed", files("bad.tree", "a(b"), good]) == 2
    assert main(["tree-ed", good, "nowhere.tree"]) == 3
    assert main(["tree-ed", "--unit", "--costs", "c.txt", good, good]) == 2


def test_tree_inclusion(capsys, files):
    p = files("p.tree", "f(b,e)")
    t = files("t.tree", "f(d(a,c(b)),e)")
    assert run(capsys, "tree-incl", p, t) == (0, "included\n")
    assert run(capsys, "ti", t, p) == (1, "not included\n")
    assert run(capsys, "tree-incl", "--report-roots", p, t) == (0, "1\n")


def test_tree_inclusion_roots_in_preorder(capsys, files):
    p = files("p.tree", "a")
    t = files("t.tree", "b(a,c(a))")
    assert run(capsys, "tree-incl", "--report-roots", p, t) == (0, "1 2 3 4\n")
    code, out = run(capsys, "--json", "tree-incl", "--report-roots", p, t)
    assert json.loads(out) == {"cmd": "tree-incl", "included": True, "roots": [1, 2, 3, 4]}


def test_tps_reference_instance(capsys, files):
    p = files("p.tree", "a(c(a),b)")
    t = files("t.tree", "a(c(a(b),b(b)))")
    expected = "p1 ⊑ t1\np2 ⊑ t1\np2 ⊑ t2\n"
    assert run(capsys, "tps", p, t) == (0, expected)
    assert run(capsys, "tps", "--fast", "--micro-size", "2", p, t) == (0, expected)
    code, out = run(capsys, "--json", "tps", p, t)
    assert json.loads(out)["pairs"] == [[1, 1], [2, 1], [2, 2]]
    assert main(["tps", "--fast", "--micro-size", "1", p, t]) == 2


def test_edit_distance(capsys):
    assert run(capsys, "ed", "kitten", "sitting") == (0, "3\n")
    assert run(capsys, "ed", "--fr", "kitten", "sitting") == (0, "3\n")
    assert run(capsys, "--word-bits", "8", "ed", "--fr", "kitten", "sitting") == (0, "3\n")


def test_agrep(capsys, files):
    plain = files("ananas.txt", ANANAS)
    assert run(capsys, "agrep", "-k", "2", "base", plain) == (0, "6 7 8 9 10 12\n")
    assert run(capsys, "ag", "-k", "0", "nan", plain) == (0, "4 11\n")
    assert main(["agrep", "-k", "3", "abc", plain]) == 2


def test_aregex(capsys, files):
    plain = files("ananas.txt", ANANAS)
    assert run(capsys, "aregex", "-d", "0", "a", plain) == (0, "1 3 5 8 10\n")
    assert run(capsys, "aregex", "-d", "1", "--whole", "ananasbananar", plain) == (0, "1 accepted\n")
    assert run(capsys, "ar", "-d", "0", "--whole", "ananas", plain) == (1, "1 rejected\n")


def test_subsequence_index(capsys, files, tmp_path):
    text = files("text.txt", ANANAS)
    index = str(tmp_path / "text.pmsq")
    code, _ = run(capsys, "subseq", "build", text, "-o", index)
    assert code == 0
    assert run(capsys, "subseq", "query", index, "aaber") == (0, "yes\n")
    assert run(capsys, "sq", "query", index, "rb") == (1, "no\n")
    assert main(["subseq", "query", files("junk.pmsq", b"PMSQ0"), "a"]) == 4
    assert main(["subseq"]) == 2


@pytest.mark.parametrize("scheme", ["zl78", "zlw"])
def test_zl_round_trip(capsys, files, tmp_path, scheme):
    text = files("text.txt", b"abracadabra " * 50)
    packed = str(tmp_path / "text.pmzl")
    unpacked = str(tmp_path / "text.out")
    assert main(["zl", "compress", text, "-o", packed, "--scheme", scheme]) == 0
    assert main(["zl", "decompress", packed, "-o", unpacked]) == 0
    assert (tmp_path / "text.out").read_bytes() == b"abracadabra " * 50
    capsys.readouterr()
    assert run(capsys, "zregex", "--no-empty", "cad", packed)[1].split()[:2] == ["7", "19"]


def test_search_logging(capsys, files, tmp_path, monkeypatch):
    monkeypatch.setenv("PATMAT_LOG_ENABLED", "true")
    plain = files("ananas.txt", ANANAS)
    logs = tmp_path / "logs"
    assert main(["--log-dir", str(logs), "agrep", "-k", "1", "nana", plain]) == 0
    lines = (logs / "search_operations.log").read_text(encoding="utf-8").splitlines()
    entries = [json.loads(line.split("] ", 1)[1]) for line in lines]
    assert [e["action"] for e in entries] == ["start", "result"]
    assert entries[0]["type"] == "agrep" and entries[0]["k"] == 1
    assert entries[1]["success"] is True and entries[1]["matches"] > 0
    stats = json.loads((logs / "search_stats.json").read_text(encoding="utf-8"))
    assert stats["agrep"]["total"] == 1


def test_bad_configuration(capsys, monkeypatch):
    monkeypatch.setenv("PATMAT_TAU", "0")
    assert main(["ed", "a", "b"]) == 2


def test_bench_lists_suites(capsys):
    code, out = run(capsys, "bench")
    assert code == 0
    for suite in ("regex-engines", "zl", "trees", "approx"):
        assert suite in out


def test_bench_unknown_suite(capsys):
    assert main(["bench", "nosuch"]) == 2


def test_bench_writes_report(capsys, tmp_path):
    out_dir = tmp_path / "report"
    assert main(["--threads", "2", "bench", "zl", "approx", "-n", "300", "-r", "1", "-o", str(out_dir)]) == 0
    results = json.loads((out_dir / "results.json").read_text(encoding="utf-8"))
    assert results["suites"] == ["zl", "approx"]
    assert {r["suite"] for r in results["rows"]} == {"zl", "approx"}
    assert "## zl" in (out_dir / "bench.md").read_text(encoding="utf-8")
