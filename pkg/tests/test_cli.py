import json
import os

import pytest

from pvcsp import cli, formats, generators
from pvcsp.cli import EXIT_ERROR, EXIT_NO, EXIT_YES, main

STRUCTURE = """domain 0 1
symbol neq 2 default inf
0 1 : 0
1 0 : 0
"""

SAT_INSTANCE = """vars x y
term neq x y
threshold 0
"""

ODD_CYCLE_INSTANCE = """vars x y z
term neq x y
term neq y z
term neq z x
threshold 0
"""


@pytest.fixture
def files(tmp_path):
    s = tmp_path / "structure.pvcsp"
    s.write_text(STRUCTURE)
    sat = tmp_path / "sat.pvcsp"
    sat.write_text(SAT_INSTANCE)
    cyc = tmp_path / "cycle.pvcsp"
    cyc.write_text(ODD_CYCLE_INSTANCE)
    return tmp_path, str(s), str(sat), str(cyc)


def test_solve_yes_exit_code(files, capsys):
    _, s, sat, _ = files
    assert main(["solve", "--structure", s, "--instance", sat]) == EXIT_YES
    out = capsys.readouterr().out
    assert "verdict: yes" in out


def test_solve_no_exit_code(files, capsys):
    _, s, _, cyc = files
    assert main(["solve", "--structure", s, "--instance", cyc]) == EXIT_NO
    out = capsys.readouterr().out
    assert "verdict: no" in out


def test_solve_blp_accepts_odd_cycle(files):
    _, s, _, cyc = files
    code = main(["solve", "--structure", s, "--instance", cyc, "--algorithm", "blp"])
    assert code == EXIT_YES


def test_solve_json_payload(files, capsys):
    _, s, sat, _ = files
    main(["solve", "--structure", s, "--instance", sat, "--json"])
    payload = json.loads(capsys.readouterr().out)
    assert payload["verdict"] == "yes" and payload["blp_value"] == "0"


def test_solve_missing_file_is_error(files, capsys):
    _, s, _, _ = files
    assert main(["solve", "--structure", s, "--instance", "/nope"]) == EXIT_ERROR
    assert "error" in capsys.readouterr().err


def test_solve_malformed_value_is_error(files, tmp_path, capsys):
    bad = tmp_path / "bad.pvcsp"
    bad.write_text("domain 0 1\nsymbol f 1 default 1/0\n")
    _, _, sat, _ = files
    assert main(["solve", "--structure", str(bad), "--instance", sat]) == EXIT_ERROR


def test_check_accepts_valid_fpol(files, tmp_path, capsys):
    _, s, _, _ = files
    measure = tmp_path / "m.pvcsp"
    measure.write_text(
        "measure frachom\narity 1\nin_domain 0 1\nout_domain 0 1\n"
        "map 1\n0 : 0\n1 : 1\n"
    )
    assert main(["check", "--measure", str(measure), "--structure", s]) == EXIT_YES
    assert "ok" in capsys.readouterr().out


def test_check_flags_violation(tmp_path, capsys):
    s = tmp_path / "s.pvcsp"
    s.write_text("domain 0 1\nsymbol w 1 default 0\n1 : 1\n")
    g = tmp_path / "g.pvcsp"
    g.write_text("domain 0 1\nsymbol w 1 default 1\n")
    measure = tmp_path / "m.pvcsp"
    measure.write_text(
        "measure frachom\narity 1\nin_domain 0 1\nout_domain 0 1\n"
        "map 1\n0 : 0\n1 : 1\n"
    )
    code = main(
        ["check", "--measure", str(measure), "--structure", str(s), "--gamma", str(g)]
    )
    assert code == EXIT_NO
    assert "violated" in capsys.readouterr().out


def test_construct_bimultiset(files, tmp_path, capsys):
    _, s, _, _ = files
    out = tmp_path / "built.pvcsp"
    code = main(
        ["construct", "--structure", s, "--partition", "sizes:2,1", "--output", str(out)]
    )
    assert code == EXIT_YES
    built = formats.parse_structure(out.read_text())
    # 3 multisets of size 2 times 2 of size 1
    assert len(built.domain) == 6


def test_construct_cap_exceeded(files, capsys):
    _, s, _, _ = files
    code = main(
        ["construct", "--structure", s, "--partition", "sizes:3,2", "--cap", "5"]
    )
    assert code == EXIT_ERROR


def test_compare_clean_run(capsys):
    code = main(["compare", "--family", "xor", "--count", "5", "--seed", "1"])
    assert code == EXIT_YES
    out = capsys.readouterr().out
    assert "flagged disagreements: 0/5" in out


def test_compare_blp_needs_expect_weak(capsys):
    args = ["compare", "--family", "xor", "--count", "40", "--seed", "2",
            "--engines", "blp"]
    first = main(args)
    capsys.readouterr()
    second = main(args + ["--expect-weak"])
    assert second == EXIT_YES
    # the BLP-only engine accepts some unsatisfiable parity systems
    if first == EXIT_NO:
        assert "DISAGREE" in capsys.readouterr().out


def test_compare_report_is_deterministic(capsys):
    args = ["compare", "--family", "random", "--count", "10", "--seed", "9", "--json"]
    main(args)
    first = capsys.readouterr().out
    main(args)
    assert capsys.readouterr().out == first


def test_gen_writes_fixture(tmp_path):
    out = tmp_path / "fixture"
    assert main(["gen", "--family", "random", "--seed", "4", "--output", str(out)]) == EXIT_YES
    s = formats.parse_structure((out / "structure.pvcsp").read_text())
    ins = formats.parse_instance((out / "instance.pvcsp").read_text())
    assert (out / "gamma.pvcsp").exists()
    for term in ins.terms:
        assert term.symbol in s.signature
