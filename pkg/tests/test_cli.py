import json
import subprocess
import sys

import pytest

from logpi1.cli import EXIT_INVALID, EXIT_OK, bundled_examples, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("argv,expected", [
    (("curve", "analyze", "two_genus1.json"), "NONTRIVIAL in Out (obstruction degree 3→4)"),
    (("lie", "dims", "--gens", "2", "--q", "4"), "2 1 2 3"),
    (("lie", "dims", "--symplectic", "2", "--q", "3"), "4 5 16"),
    (("lie", "inner", "inner_obstruction.json"), "not inner (obstruction degree 3→4)"),
    (("lie", "inner", "inner_witness.json"), "inner"),
    (("curve", "loop", "loop3.json"), "6"),
    (("minimal-model", "unmarked_g2.json", "--stages", "3"), "4 5 16"),
    (("validate", "marked_0_3.json"), "valid"),
])
def test_text_outputs(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert code == EXIT_OK
    assert out.strip() == expected


def test_bch_listing(capsys):
    code, out, _ = run(capsys, "lie", "bch", "--q", "3")
    assert code == EXIT_OK
    assert [line.split() for line in out.strip().splitlines()] == [
        ["1/1", "X"], ["1/1", "Y"], ["1/2", "[X,Y]"], ["1/12", "[X,[X,Y]]"], ["1/12", "[[X,Y],Y]"]]


def test_bar_report_json(capsys):
    code, out, _ = run(capsys, "bar", "marked_0_3.json", "--stages", "2", "--cap", "2", "--format", "json")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["gr_dims"] == [1, 2, 4]
    assert doc["qh0_gr_dims"] == doc["m1_gr_dims"] == [2, 1]


@pytest.mark.parametrize("argv", [
    ("curve", "analyze", "two_genus1.json", "--format", "json"),
    ("curve", "presentation", "y_tree.json", "--q", "3", "--format", "json"),
    ("minimal-model", "marked_0_3.json", "--format", "json"),
    ("lie", "inner", "inner_witness.json", "--format", "json"),
])
def test_json_is_byte_identical_across_runs(capsys, argv):
    first = run(capsys, *argv)[1]
    second = run(capsys, *argv)[1]
    assert first == second
    json.loads(first)


def test_out_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, _, _ = run(capsys, "curve", "loop", "self_loop.json", "--out", str(target))
    assert code == EXIT_OK
    assert json.loads(target.read_text())["pairing"] == 2


def test_invalid_graph_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"vertices": [{"id": "A", "genus": 0, "marked": 1}, {"id": "B", "genus": 0, "marked": 1}],
                               "edges": [{"id": "e", "ends": ["A", "B"]}]}))
    code, out, _ = run(capsys, "validate", str(bad))
    assert code == EXIT_INVALID and out.startswith("invalid")
    code, _, err = run(capsys, "curve", "analyze", str(bad))
    assert code == EXIT_INVALID and "error" in err


def test_missing_file_and_no_loop(capsys):
    assert run(capsys, "curve", "analyze", "does_not_exist.json")[0] == EXIT_INVALID
    assert run(capsys, "curve", "loop", "two_genus1.json")[0] == EXIT_INVALID


def test_malformed_json(capsys, tmp_path):
    bad = tmp_path / "x.json"
    bad.write_text("{not json")
    assert run(capsys, "validate", str(bad))[0] == EXIT_INVALID


def test_usage_error_exit_code():
    proc = subprocess.run([sys.executable, "-m", "logpi1", "lie", "dims", "--bogus"], capture_output=True)
    assert proc.returncode == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "logpi1", "lie", "dims", "--gens", "3", "--q", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "3 3 8"


def test_bundled_corpus_is_complete():
    names = {p.name for p in bundled_examples().glob("*.json")}
    assert {"two_genus1.json", "loop2.json", "inner_witness.json", "stock_unmarked_2.json"} <= names


@pytest.mark.parametrize("path", sorted(p.name for p in bundled_examples().glob("stock_*.json")))
def test_bundled_models_validate(capsys, path):
    assert run(capsys, "validate", path)[:2] == (EXIT_OK, "valid\n")
