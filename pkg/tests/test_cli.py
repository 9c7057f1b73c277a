import json

import numpy as np
import pytest

from privlp.cli import main

BASIC = {
    "c": [1.0, 1.0],
    "A": [[1.0, 0.0], [0.0, 1.0]],
    "b": [1.0, 1.0],
    "sup_A": [[3.0, 0.0], [0.0, 3.0]],
    "privacy": {"epsilon": 1.0, "delta": 0.05, "k": 1.0},
}

GRID = {"width": 5, "height": 5, "start": [2, 0], "goal": [2, 4],
        "hazards": [{"cell": [1, 2], "beta": 1.0}, {"cell": [2, 2], "beta": 1.0},
                    {"cell": [3, 2], "beta": 1.0}],
        "slip": 0.1, "gamma": 0.9, "f0": 0.35}


@pytest.fixture
def problem_file(tmp_path):
    path = tmp_path / "problem.json"
    path.write_text(json.dumps(BASIC))
    return str(path)


@pytest.fixture
def grid_file(tmp_path):
    path = tmp_path / "grid.json"
    path.write_text(json.dumps(GRID))
    return str(path)


def test_privatize_deterministic_bytes(problem_file, tmp_path):
    out1, out2 = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    assert main(["privatize", problem_file, "--seed", "9", "--out", out1]) == 0
    assert main(["privatize", problem_file, "--seed", "9", "--out", out2]) == 0
    assert open(out1, "rb").read() == open(out2, "rb").read()
    doc = json.loads(open(out1).read())
    assert doc["mechanism"]["seed"] == 9
    assert doc["mechanism"]["sigma"] == 1.0
    A = np.array(doc["A"])
    assert (A >= np.array(BASIC["A"])).all()
    assert (A <= np.array(BASIC["sup_A"])).all()


def test_privatize_fully_masked_passes_through(tmp_path, capsys):
    doc = {"c": [1.0], "A": [[0.0]], "b": [1.0], "sup_A": [[0.0]],
           "privacy": {"epsilon": 1.0, "delta": 0.05, "k": 1.0}}
    path = tmp_path / "masked.json"
    path.write_text(json.dumps(doc))
    assert main(["privatize", str(path)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["A"] == [[0.0]]
    assert out["mechanism"]["row_supports"] == [0.0]


def test_privatize_row_supports_match_closed_form(problem_file, capsys):
    from privlp import support_width
    assert main(["privatize", problem_file, "--seed", "1"]) == 0
    doc = json.loads(capsys.readouterr().out)
    expected = support_width(1.0, 1.0, 0.05, 1)  # one free entry per row
    assert doc["mechanism"]["row_supports"] == pytest.approx([expected, expected])


def test_solve_unit_box(problem_file, capsys):
    assert main(["solve", problem_file]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["status"] == "Optimal"
    assert payload["objective"] == pytest.approx(2.0)


def test_private_solve_reports_original_feasibility(problem_file, capsys):
    assert main(["solve", problem_file, "--private", "--seed", "4"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["status"] == "Optimal"
    assert payload["original_feasible"] is True
    assert payload["objective"] <= 2.0 + 1e-12


def test_private_objective_never_beats_nonprivate_across_seeds(problem_file, capsys):
    for seed in range(100):
        assert main(["solve", problem_file, "--private", "--seed", str(seed)]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["original_feasible"] is True
        assert payload["objective"] <= 2.0 + 1e-12


def test_privacy_flags_override_file(problem_file, capsys):
    assert main(["privatize", problem_file, "--epsilon", "2.0", "--k", "0.5"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["mechanism"]["sigma"] == 0.25  # k / epsilon


def test_bound_zero_objective(tmp_path, capsys):
    doc = dict(BASIC, c=[0.0, 0.0])
    path = tmp_path / "zero.json"
    path.write_text(json.dumps(doc))
    assert main(["bound", str(path)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["L"] == 0.0
    assert payload["bound"] == 0.0


def test_bound_clipped_zero_when_matrix_at_supremum(tmp_path, capsys):
    doc = {"c": [1.0], "A": [[3.0]], "b": [1.0], "sup_A": [[3.0]],
           "privacy": {"epsilon": 1.0, "delta": 0.05, "k": 1.0}}
    path = tmp_path / "atsup.json"
    path.write_text(json.dumps(doc))
    assert main(["bound", str(path)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["xi_case"] == "clipped"
    assert payload["xi"] == 0.0
    assert payload["bound"] == 0.0


def test_sweep_writes_csv_and_json(grid_file, tmp_path):
    prefix = str(tmp_path / "sweep")
    args = ["sweep", "--grid-config", grid_file, "--eps-grid", "0.5,2",
            "--trials", "5", "--seed", "11", "--k", "0.25", "--out", prefix]
    assert main(args) == 0
    csv_text = open(prefix + ".csv").read()
    lines = csv_text.splitlines()
    assert lines[0] == "epsilon,mean_cop_percent,std_cop,mean_abs_gap,bound,trials,infeasible"
    assert len(lines) == 3
    records = json.loads(open(prefix + ".json").read())
    assert [r["epsilon"] for r in records] == [0.5, 2.0]
    assert all(r["n_infeasible"] == 0 for r in records)


def test_sweep_byte_identical_on_repeat(grid_file, tmp_path):
    args = lambda p: ["sweep", "--grid-config", grid_file, "--eps-grid", "1,3",
                      "--trials", "4", "--seed", "21", "--k", "0.25", "--out", p]
    assert main(args(str(tmp_path / "one"))) == 0
    assert main(args(str(tmp_path / "two"))) == 0
    assert open(tmp_path / "one.csv", "rb").read() == open(tmp_path / "two.csv", "rb").read()
    assert open(tmp_path / "one.json", "rb").read() == open(tmp_path / "two.json", "rb").read()


def test_sweep_on_lp_problem(problem_file, capsys):
    assert main(["sweep", problem_file, "--eps-grid", "1,2", "--trials", "6"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 3
    for line in lines[1:]:
        fields = line.split(",")
        assert float(fields[3]) <= float(fields[4])  # mean gap within bound


def test_sweep_requires_exactly_one_source(problem_file, grid_file, capsys):
    assert main(["sweep"]) == 1
    assert main(["sweep", problem_file, "--grid-config", grid_file]) == 1


def test_validation_failure_exits_nonzero(tmp_path, capsys):
    bad = {"c": [1.0], "A": [[1.0]], "b": [-1.0], "sup_A": [[2.0]]}
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    assert main(["solve", str(path)]) == 1
    assert "worst-case region" in capsys.readouterr().err


def test_missing_epsilon_reported(tmp_path, capsys):
    doc = {"c": [1.0], "A": [[1.0]], "b": [1.0], "sup_A": [[2.0]]}
    path = tmp_path / "noeps.json"
    path.write_text(json.dumps(doc))
    assert main(["privatize", str(path)]) == 1
    assert "epsilon" in capsys.readouterr().err


def test_unreadable_file_reported(capsys):
    assert main(["solve", "/nonexistent/problem.json"]) == 1
    assert "cannot read" in capsys.readouterr().err
