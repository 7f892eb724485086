import json

import pytest

from core.cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main

SCRIPT = """\
let A = block("S_hat")
let B = block("X(3,1)")
let Z = sum(A, "Rtilde", B, "Sigma6")
assert Z.e == 52
"""


@pytest.fixture
def cli(settings_file):
    def invoke(*argv):
        return main(["--settings", str(settings_file), *argv])
    return invoke


def test_help_exits_cleanly(capsys):
    assert main(["--help"]) == EXIT_OK
    assert "usage" in capsys.readouterr().out


def test_unknown_command_is_a_usage_error(cli):
    assert cli("frobnicate") == EXIT_USAGE


def test_run(cli, tmp_path, capsys):
    path = tmp_path / "z3.fourfold"
    path.write_text(SCRIPT, encoding="utf-8")
    out_json = tmp_path / "out" / "states.json"
    assert cli("run", str(path), "--json", str(out_json)) == EXIT_OK
    assert "ok: 52 == 52" in capsys.readouterr().out
    saved = json.loads(out_json.read_text(encoding="utf-8"))
    assert set(saved) == {"A", "B", "Z"}
    assert saved["Z"]["e"] == 52
    assert saved["Z"]["pi1"] == "trivial"


def test_run_failed_assert(cli, tmp_path, capsys):
    path = tmp_path / "bad.fourfold"
    path.write_text(SCRIPT.replace("52", "53"), encoding="utf-8")
    assert cli("run", str(path)) == EXIT_FAILURE
    assert "assertion failed at line 4: 52 != 53" in capsys.readouterr().out


def test_run_syntax_error(cli, tmp_path, capsys):
    path = tmp_path / "bad.fourfold"
    path.write_text("let = 3\n", encoding="utf-8")
    assert cli("run", str(path)) == EXIT_FAILURE
    assert "line 1:5" in capsys.readouterr().err


def test_audit_table(cli, capsys):
    assert cli("audit") == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].split()[:4] == ["claim", "stated", "computed", "status"]
    assert lines[-1].endswith("mismatches")
    assert not lines[-1].startswith("0 claims")


def test_audit_json_filter(cli, capsys):
    assert cli("audit", "--json", "--only", "M25.") == EXIT_OK
    rows = json.loads(capsys.readouterr().out)
    assert rows and all(r["claim_id"].startswith("M25.") for r in rows)
    e_row = next(r for r in rows if r["claim_id"] == "M25.e")
    assert (e_row["stated"], e_row["computed"], e_row["status"]) == (50, 58, "MISMATCH")


def test_scan(cli, tmp_path):
    out = tmp_path / "g.csv"
    code = cli("scan", "--chi-min", "13", "--chi-max", "14", "--c-min", "104", "--c-max", "105",
               "--base", "Z3", "--out", str(out))
    assert code == EXIT_OK
    assert out.read_text(encoding="utf-8").splitlines() == [
        "chi_h,c1_sq,realized,citation",
        "13,104,true,Z3",
        "13,105,false,",
        "14,104,true,chi >= 1 and 0 <= c <= 8chi over Z3",
        "14,105,true,chi >= 1 and 0 <= c <= 8chi over Z3",
    ]


def test_scan_empty_window_writes_the_header(cli, tmp_path):
    out = tmp_path / "empty.csv"
    code = cli("scan", "--chi-min", "5", "--chi-max", "4", "--c-min", "0", "--c-max", "1",
               "--base", "Z3", "--out", str(out))
    assert code == EXIT_OK
    assert out.read_text(encoding="utf-8") == "chi_h,c1_sq,realized,citation\n"


def test_scan_needs_an_output(cli):
    assert cli("scan", "--chi-min", "1", "--chi-max", "2", "--c-min", "0", "--c-max", "1", "--base", "Z3") == EXIT_USAGE


def test_scan_unknown_base(cli, tmp_path, capsys):
    code = cli("scan", "--chi-min", "1", "--chi-max", "2", "--c-min", "0", "--c-max", "1",
               "--base", "Z9", "--out", str(tmp_path / "x.csv"))
    assert code == EXIT_FAILURE
    assert "neither a pipeline nor a catalog block" in capsys.readouterr().err


def test_catalog(cli, capsys):
    assert cli("catalog") == EXIT_OK
    out = capsys.readouterr().out
    for section in ("blocks:", "pipelines:", "covers:"):
        assert section in out.splitlines()
    assert "S_hat" in out and "hirzebruch_tower(m)" in out


def test_pi1_abelianize(cli, tmp_path, capsys):
    path = tmp_path / "g.txt"
    path.write_text("gens: a b c\nrels: [a,b], c^6\n", encoding="utf-8")
    assert cli("pi1", str(path)) == EXIT_OK
    assert capsys.readouterr().out == "Z^2 + Z/6\n"


def test_pi1_simplify(cli, tmp_path, capsys):
    path = tmp_path / "g.txt"
    path.write_text("gens: a b\nrels: a, b\n", encoding="utf-8")
    assert cli("pi1", str(path), "--simplify", "--budget", "500") == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("eliminate: ")
    assert out.endswith("gens: \nrels: \n")


def test_pi1_budget_needs_simplify(cli, tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("gens: a\nrels: a\n", encoding="utf-8")
    assert cli("pi1", str(path), "--budget", "10") == EXIT_USAGE


def test_pi1_bad_file(cli, tmp_path, capsys):
    path = tmp_path / "g.txt"
    path.write_text("gens a b\n", encoding="utf-8")
    assert cli("pi1", str(path)) == EXIT_FAILURE
    assert capsys.readouterr().err.startswith("error: ")


def test_show(cli, capsys):
    assert cli("show", "M35") == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert (data["e"], data["sigma"], data["c1sq"], data["chi_h"]) == (57, 3, 123, 15)
    assert (data["b2plus"], data["b2minus"]) == (29, 26)
