import csv
import io
import json

import pytest

from shiftnorm.cli import CSV_COLUMNS, main


def run(argv, capsys):
    code = main(argv)
    return code, capsys.readouterr().out


def run_json(argv, capsys):
    code, out = run(argv + ["--format", "json"], capsys)
    return code, json.loads(out)


def test_bound_examples(capsys):
    code, doc = run_json(["bound", "sharp-r", "r=0.5"], capsys)
    assert code == 0 and doc["certificates"][0]["rhs"] == pytest.approx(2 / 3)
    code, doc = run_json(["bound", "thm2", "eps=0.1", "delta=0.1"], capsys)
    assert code == 0 and doc["certificates"][0]["lhs"] == pytest.approx(0.17242, abs=1e-5)
    code, doc = run_json(["bound", "interpolation", "p=1"], capsys)
    assert doc["certificates"][0]["lhs"] == 2
    code, doc = run_json(["bound", "interpolation", "p=inf"], capsys)
    assert code == 0 and doc["certificates"][0]["params"]["p"] == "inf"


def test_bound_uses_published_witness_by_default(capsys):
    code, doc = run_json(["bound", "bergman-a1"], capsys)
    c = doc["certificates"][0]
    assert code == 0 and c["params"]["alpha"] == 0.165 and c["params"]["range_violation"] == 1.0


def test_failing_certificate_sets_exit_status(capsys):
    code, _ = run(["bound", "h1-bshift", "alpha=0.1", "beta=0.476286"], capsys)
    assert code == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["bound", "thm1", "eps=abc"],
        ["bound", "thm1", "eps"],
        ["bound", "thm1", "gamma=0.1"],
        ["bound", "thm1"],
        ["bound", "thm1", "eps=0.3"],
        ["bound", "nope"],
        ["search", "B", "h1", "cutoff", "5"],
        ["search", "S", "hinf", "cutoff", "5"],
        ["search", "S", "hinf", "mobius", "0"],
        ["search", "S_r", "h1", "poisson", "5"],
        ["search", "S", "q7", "mobius", "5"],
        ["verify", "everything"],
        ["bound", "thm1", "eps=0.1", "--grid", "1000"],
        ["bound", "thm1", "eps=0.1", "--jobs", "0"],
        ["bound", "thm1", "eps=0.1", "--tol", "oops"],
    ],
)
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_search_examples(capsys):
    code, doc = run_json(["search", "S", "hinf", "mobius", "200"], capsys)
    assert code == 0 and doc["extra"]["search"]["best_ratio"] >= 1.99
    code, doc = run_json(["search", "S", "h1", "cutoff", "64"], capsys)
    assert doc["extra"]["search"]["best_ratio"] == pytest.approx(1.99005, abs=1e-5)
    code, doc = run_json(["search", "B", "h2", "poly", "500", "--grid", "256"], capsys)
    assert code == 0 and doc["extra"]["search"]["best_ratio"] <= 1 + 1e-9
    code, doc = run_json(["search", "S_r", "h1", "poisson", "30", "r=0.5"], capsys)
    assert code == 0 and doc["certificates"][0]["rhs"] == pytest.approx(2 / 3)
    code, doc = run_json(["search", "S", "a1w2", "poly", "40", "degree=2", "--grid", "256",
                          "--radial-nodes", "32"], capsys)
    assert code == 0 and doc["certificates"][0]["rhs"] == pytest.approx(1.952396)


def test_csv_columns(capsys):
    code, out = run(["bound", "h1-szop", "--format", "csv"], capsys)
    rows = list(csv.reader(io.StringIO(out)))
    assert tuple(rows[0]) == CSV_COLUMNS and len(rows) == 2
    assert json.loads(rows[1][1])["gamma"] == pytest.approx(0.104634)
    assert rows[1][-1] == "true"


def test_text_output(capsys):
    code, out = run(["bound", "sharp-r", "r=0.5"], capsys)
    assert "pass" in out and "1/1 passed" in out


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults for this run\ngrid = 512\nseed = 9\nformat = json\ntol.sharp_szr_constant = 0.5\n")
    code, out = run(["bound", "sharp-r", "r=0.5", "--config", str(cfg), "--seed", "3"], capsys)
    doc = json.loads(out)
    assert doc["config"]["grid"] == 512 and doc["config"]["seed"] == 3
    assert doc["certificates"][0]["params"]["tol"] == 0.5


def test_bad_config_is_usage_error(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    with pytest.raises(SystemExit) as exc:
        main(["bound", "thm1", "eps=0.1", "--config", str(cfg)])
    assert exc.value.code == 2


def test_tolerance_override_can_fail_a_certificate(capsys):
    code, doc = run_json(["bound", "sharp-r", "r=0.5", "--tol", "sharp_szr_constant=1e-12"], capsys)
    assert code == 1 and not doc["certificates"][0]["pass"]


def test_out_file(tmp_path, capsys):
    path = tmp_path / "report.json"
    code = main(["bound", "thm1", "eps=0.1", "--format", "json", "--out", str(path)])
    assert code == 0 and capsys.readouterr().out == ""
    doc = json.loads(path.read_text())
    assert doc["summary"] == {"total": 1, "passed": 1, "failed": 0}


def test_verify_single_suite(capsys):
    code, doc = run_json(["verify", "circlefn", "--seed", "5"], capsys)
    assert code == 0 and all(c["pass"] for c in doc["certificates"])
    assert all(c["name"].startswith("circlefn.") for c in doc["certificates"])
    assert "wall_time" not in doc


def test_reproduce_table(capsys):
    code, doc = run_json(["reproduce"], capsys)
    assert code == 0
    rows = {r["quantity"]: r for r in doc["table"]}
    assert abs(rows["||S||_{H^1} bound"]["computed"] - 1.952396) < 5e-3
    assert abs(rows["int_0^1 sharp(r) 2r dr"]["computed"] - 1) < 1e-8
    assert rows["sharp(0)"]["computed"] == 0
