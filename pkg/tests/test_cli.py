import json

import pytest

from pascal_adic import cli
from pascal_adic.exactnum import default_table


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_word(capsys):
    assert run(capsys, "word", "--n", "6", "--k", "3") == (0, "aaabaababbaababbabbb\n", "")
    code, out, err = run(capsys, "word", "--n", "60", "--k", "30")
    assert code == 2 and "cap" in err and out == ""


def test_validation_exit_code(capsys):
    assert run(capsys, "blancmange", "--p", "1.5")[0] == 2
    assert run(capsys, "word", "--n", "3", "--k", "9")[0] == 2
    assert run(capsys, "curve", "--n", "5", "--k", "0")[0] == 2
    with pytest.raises(SystemExit) as e:
        cli.main(["nonsense"])
    assert e.value.code == 2


def test_curve_csv(capsys):
    code, out, _ = run(capsys, "curve", "--n", "6", "--k", "3", "--out", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "t,value" and len(lines) == 22
    assert lines[1] == "0,0"


def test_curve_exact(capsys):
    _, out, _ = run(capsys, "curve", "--n", "6", "--k", "3", "--samples", "4", "--exact")
    assert "1/4," in out


def test_blancmange_csv(capsys):
    _, out, _ = run(capsys, "blancmange", "--p", "1/2", "--samples", "4")
    assert out.splitlines()[2] == "0.25,1"


def test_array_json(capsys):
    _, out, _ = run(capsys, "array", "--kind", "canonical", "--p", "1/2", "--m", "3", "--exact")
    data = json.loads(out)
    assert data["lines"][3] == [["1/8", "3/4"], ["1/8", "1/4"], ["1/8", "-1/4"], ["1/8", "-3/4"]]


def test_towers_json(capsys):
    _, out, _ = run(capsys, "towers", "--n", "2", "--out", "json")
    assert json.loads(out)["towers"] == [{"k": 0, "rungs": [0]}, {"k": 1, "rungs": [1, 2]}, {"k": 2, "rungs": [3]}]


def test_orbit_deterministic(capsys, tmp_path):
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"level": 2, "values": ["1", "-1", "-1", "1"]}))
    a = run(capsys, "orbit", "--x", "0.0110", "--steps", "64", "--g", str(g), "--out", "csv")
    b = run(capsys, "orbit", "--x", "0.0110", "--steps", "64", "--g", str(g), "--out", "csv")
    assert a == b and a[0] == 0
    assert len(a[1].splitlines()) == 65


def test_poly_and_cohomology(capsys, tmp_path):
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"level": 2, "values": ["1", "-1", "-1", "1"]}))
    _, out, _ = run(capsys, "poly", "--g", str(g), "--exact")
    assert json.loads(out)["coefficients"] == ["0", "4", "-12", "8"]
    _, out, _ = run(capsys, "cohomology", "--g", str(g))
    assert out.startswith("verdict: not cohomologous")
    c = tmp_path / "c.json"
    c.write_text(json.dumps({"level": 2, "values": ["0", "1", "-1", "0"]}))
    _, out, _ = run(capsys, "cohomology", "--g", str(c))
    assert "C: 0" in out and "f: 0 0 -1 0" in out


def test_conway(capsys):
    _, out, _ = run(capsys, "conway", "--max", "5")
    assert out.splitlines() == ["j,C,D", "1,1,", "2,1,", "3,2,1", "4,2,-1", "5,3,1"]
    assert run(capsys, "conway", "--verify-concat", "--lines", "8")[:2] == (0, "PASS\n")


def test_converge(capsys, tmp_path):
    code, out, err = run(capsys, "converge", "--p", "1/2", "--n-list", "20,40,80")
    rows = [line.split(",") for line in out.splitlines()[1:]]
    d = [float(r[2]) for r in rows]
    assert code == 0 and d[0] > d[1] > d[2]
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"level": 2, "values": ["1", "-1", "-1", "1"]}))
    _, _, err = run(capsys, "converge", "--p", "1/2", "--g", str(g), "--n-list", "20,40")
    assert "P^g(p)=0: transition regime" in err


def test_figures(capsys, tmp_path):
    assert run(capsys, "figure", "fig2", "--out", str(tmp_path))[0] == 0
    assert len((tmp_path / "fig2_F63.csv").read_text().splitlines()) == 22
    assert run(capsys, "figure", "fig4", "--out", str(tmp_path))[0] == 0
    stages = {line.split(",")[0] for line in (tmp_path / "fig4_stages_p0.4.csv").read_text().splitlines()[1:]}
    assert stages == {"1", "2", "3", "4"}
    assert run(capsys, "figure", "fig9", "--out", str(tmp_path))[0] == 2


def test_selftest_subset_deterministic(capsys):
    a = run(capsys, "selftest", "--only", "cache,1,4,9")
    b = run(capsys, "selftest", "--only", "cache,1,4,9")
    assert a[0] == 0 and a[1] == b[1]
    assert "4/4 checks passed" in a[1]


def test_selftest_fault_injection(capsys):
    try:
        code, out, err = run(capsys, "selftest", "--only", "cache", "--inject-fault", "binomial-cache")
    finally:
        default_table._rows[37][11] -= 1
    assert code == 3, err
    assert "FAIL [cache] binomial cache integrity" in out
    assert default_table.check_pascal() is None
