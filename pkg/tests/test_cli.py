import json
import subprocess
import sys

import pytest

from hovels import cli
from hovels.axioms import CheckResult, Report


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def as_json(out):
    return json.loads(out)


def test_enclose_half_point(capsys):
    code, out = run(capsys, "enclose", "--json", '{"cartan": [[2]], "points": [{"rep": ["1/2"]}]}')
    doc = as_json(out)
    assert code == 0
    assert {(tuple(c["root"]), c["level"]) for c in doc["result"]["constraints"]} == {((1,), "0"), ((-1,), "1")}
    assert doc["version"] and doc["config"]["seed"] == 0


def test_iwasawa_certificate(capsys):
    code, out = run(capsys, "decompose", "--mode", "iwasawa", "--group", "SL2", "--p", "2",
                    "--json", '{"g": [{"u": {"root": [-1], "param": "1/2"}}]}')
    res = as_json(out)["result"]
    assert code == 0
    assert res["u"]["matrix"] == [["1", "2"], ["0", "1"]]
    assert res["n"]["matrix"] == [["-2", "0"], ["0", "-1/2"]]
    assert res["q"]["matrix"] == [["0", "1"], ["-1", "-2"]]
    assert res["q_fixes_F"] == "In"
    assert res["certificate"]


def test_para_check_exit_zero(capsys):
    code, out = run(capsys, "check-axioms", "--family", "minimal", "--which", "inj,dec", "--group", "SL2", "--seed", "0")
    assert code == 0
    assert all(r["passed"] for r in as_json(out)["result"]["reports"])


def test_reports_are_byte_identical(capsys):
    argv = ("check-axioms", "--suite", "valuation", "--group", "SL3", "--samples", "20", "--seed", "4")
    _, a = run(capsys, *argv)
    _, b = run(capsys, *argv)
    assert a == b


def test_check_failures_give_exit_one(capsys, monkeypatch):
    def failing(*args, **kw):
        rep = Report("stub", 0)
        res = CheckResult("inj", 1)
        res.fail("witness")
        rep.results.append(res)
        return rep
    monkeypatch.setattr(cli, "check_para_axioms", failing)
    code, out = run(capsys, "check-axioms", "--which", "inj")
    assert code == 1
    assert as_json(out)["result"]["reports"][0]["results"][0]["failures"] == ["witness"]


@pytest.mark.parametrize("argv", [
    ("enclose", "--json", '{"cartan": [[2]], "points": [{"rep": [0.5]}]}'),
    ("enclose", "--json", "not json"),
    ("roots", "--json", '{"cartan": [[2, 1], [1, 2]]}'),
    ("check-axioms", "--which", "nonsense"),
    ("decompose", "--mode", "bruhat", "--group", "LoopSL2", "--json", '{"g": []}'),
    ("descend", "--json", '{"cartan": [[2,-1],[-1,2]], "generators": [{"perm": [1,0], "omega": {"0": "1", "1": "1"}}]}'),
    ("export-tree", "--radius", "9"),
    ("frobnicate",),
])
def test_input_errors_give_exit_two(capsys, argv):
    code, _ = run(capsys, *argv)
    assert code == 2


def test_unknown_gives_exit_three(capsys):
    doc = {"x": {"g": [{"u": {"root": [1, 2], "param": "1/2"}}, {"u": {"root": [0, -1], "param": "1"}}], "a": ["0", "0"]},
           "y": {"g": [{"u": {"root": [-1, 0], "param": "1/4"}}], "a": ["1/2", "0"]}}
    code, out = run(capsys, "hovel-eq", "--group", "LoopSL2", "--json", json.dumps(doc))
    assert code == 3 and as_json(out)["result"]["verdict"] == "Unknown"


def test_hovel_eq_and_descend(capsys):
    doc = {"x": {"g": [{"u": {"root": [1], "param": "1"}}], "a": ["0"]}, "y": {"g": [], "a": ["0"]}}
    code, out = run(capsys, "hovel-eq", "--json", json.dumps(doc))
    assert code == 0 and as_json(out)["result"]["verdict"] == "Equal"
    code, out = run(capsys, "descend")
    res = as_json(out)["result"]
    assert code == 0 and res["non_reduced"] and len(res["restricted_roots"]) == 4


def test_input_file(tmp_path, capsys):
    path = tmp_path / "doc.json"
    path.write_text('{"cartan": [[2, -1], [-1, 2]]}')
    code, out = run(capsys, "roots", "--input", str(path), "--height", "2")
    assert code == 0 and as_json(out)["result"]["count"] == 6


def test_export_tree(capsys):
    code, out = run(capsys, "export-tree", "--p", "3", "--radius", "1")
    assert code == 0 and out.count("label=") == 5


def test_console_script_entry():
    proc = subprocess.run([sys.executable, "-m", "hovels.cli", "export-tree", "--p", "2", "--radius", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.count(" -- ") == 3
