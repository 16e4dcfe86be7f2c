import csv
import json

import pytest

from minrank.cli import EXIT_ABORT, EXIT_OK, EXIT_USAGE, main
from minrank.io import CSV_COLUMNS, FormatError, dumps_instance, instance_from_dict, instance_to_dict, load_instance
from minrank.polymatrix import DegreeMatrix, degree_matrix_from_offsets, random_instance


def test_instance_roundtrip_classical(classical_333):
    data = instance_to_dict(classical_333)
    assert data["format"] == 1 and len(data["matrices"]) == 4
    back = instance_from_dict(json.loads(json.dumps(data)))
    assert back.matrix.entries == classical_333.matrix.entries
    assert dumps_instance(back) == dumps_instance(classical_333)


def test_instance_roundtrip_generalized():
    D = degree_matrix_from_offsets((1, 2), (0, 1, 1))
    inst = random_instance("generalized", 2, 3, 1, 3, D, 101, False, 4)
    back = instance_from_dict(instance_to_dict(inst))
    assert back.matrix.entries == inst.matrix.entries and not back.homogeneous


def test_unsorted_grid_is_normalized():
    data = {
        "format": 1, "kind": "generalized", "m": 2, "n": 2, "r": 1, "k": 1, "p": 7, "seed": None,
        "degree_matrix": [[2, 2], [1, 1]], "entries": [["x1^2", "x1^2 + 1"], ["x1", "3*x1"]],
    }
    inst = instance_from_dict(data)
    assert inst.degrees.to_list() == [[1, 1], [2, 2]]
    assert inst.matrix.entries[0][1].to_text() == "3*x1"


@pytest.mark.parametrize(
    "patch",
    [{"format": 2}, {"kind": "other"}, {"matrices": [[[1]]]}, {"r": 3}, {"p": 100}],
)
def test_malformed_instances(classical_333, patch):
    data = instance_to_dict(classical_333)
    data.update(patch)
    with pytest.raises(FormatError):
        instance_from_dict(data)


def test_gen_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["gen", "--kind", "classical", "-m", "3", "-n", "3", "-r", "1", "-k", "4", "-p", "101", "--seed", "7"]
    assert main(args + ["--out", str(a)]) == EXIT_OK
    assert main(args + ["--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert len(json.loads(a.read_text())["matrices"]) == 4


def test_gen_rejects_bad_params(capsys):
    assert main(["gen", "-m", "3", "-n", "3", "-r", "3", "-k", "4"]) == EXIT_USAGE
    assert "r < m" in capsys.readouterr().err
    assert main(["gen", "-m", "3", "-n", "3", "-r", "1", "-k", "4", "--degree-const", "2"]) == EXIT_USAGE
    assert main(["nonsense"]) == EXIT_USAGE


def test_bound_command(capsys, tmp_path):
    assert main(["bound", "-m", "3", "-n", "3", "-r", "1", "-k", "4"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["bound_main"] == 3
    assert main(["bound", "-m", "3", "-n", "3", "-r", "1", "-k", "4", "--degree-const", "2", "--kind", "generalized"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["bound_main"] == 9
    assert main(["bound", "-m", "2", "-n", "2", "-r", "1", "-k", "1", "--degree-grid", "[[1,1],[1,2]]"]) == EXIT_USAGE
    assert "additivity" in capsys.readouterr().err
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["bound", str(bad)]) == EXIT_USAGE
    assert main(["bound", "-m", "3", "-n", "3", "-r", "1", "-k", "4", "--table"]) == EXIT_OK
    assert "well-defined" in capsys.readouterr().out


def _gen(tmp_path, *extra, name="inst.json"):
    path = tmp_path / name
    assert main(["gen", *extra, "--out", str(path)]) == EXIT_OK
    return path


def test_solve_command(tmp_path, capsys):
    path = _gen(tmp_path, "-m", "3", "-n", "3", "-r", "1", "-k", "4", "--seed", "7")
    capsys.readouterr()
    assert main(["solve", str(path)]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["solving_degree"]["measured_solvdeg"] <= 3
    assert out["solving_degree"]["bound_respected"] is True


def test_solve_2x2(tmp_path, capsys):
    path = _gen(tmp_path, "-m", "2", "-n", "2", "-r", "1", "-k", "1", "--seed", "1")
    capsys.readouterr()
    assert main(["solve", str(path)]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["solving_degree"]["measured_solvdeg"] == 2


def test_solve_over_determined_needs_override(tmp_path, capsys):
    path = _gen(tmp_path, "-m", "3", "-n", "3", "-r", "1", "-k", "3", "--seed", "2")
    assert main(["solve", str(path)]) == EXIT_USAGE
    capsys.readouterr()
    assert main(["solve", str(path), "--override"]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["bounds"]["applicable"] is False


def test_solve_cap_abort(tmp_path, capsys):
    path = _gen(tmp_path, "-m", "3", "-n", "3", "-r", "1", "-k", "4", "--seed", "7")
    assert main(["solve", str(path), "--cap", "2"]) == EXIT_ABORT
    assert "cap" in capsys.readouterr().err


def test_solve_affine_generalized(tmp_path, capsys):
    path = _gen(
        tmp_path, "--kind", "generalized", "-m", "2", "-n", "3", "-r", "1", "-k", "2",
        "--degree-grid", "[[1,2,2],[2,3,3]]", "--no-homogeneous", "--seed", "3",
    )
    capsys.readouterr()
    assert main(["solve", str(path)]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["homogenized"] and out["solving_degree"]["bound_respected"]


def test_bruteforce_command(tmp_path, capsys):
    path = _gen(tmp_path, "-m", "2", "-n", "2", "-r", "1", "-k", "1", "-p", "5", "--seed", "0")
    capsys.readouterr()
    assert main(["bruteforce", str(path)]) == EXIT_OK
    out = json.loads(capsys.readouterr().out)
    assert out["solutions"] == [[0]] and out["agrees"] and out["points"] == 5
    big = _gen(tmp_path, "-m", "2", "-n", "2", "-r", "1", "-k", "4", "-p", "65521", name="big.json")
    assert main(["bruteforce", str(big)]) == EXIT_USAGE


def test_experiment_command(tmp_path, capsys):
    cfg = {
        "cells": [
            {"m": 3, "n": 3, "r": 1, "k": 4},
            {"m": 4, "n": 4, "r": 2, "k": 4},
            {"m": 3, "n": 3, "r": 1, "k": 5},
        ],
        "trials": 20,
        "base_seed": 100,
    }
    cfg_path, out_csv, out_json = tmp_path / "cfg.json", tmp_path / "rows.csv", tmp_path / "sum.json"
    cfg_path.write_text(json.dumps(cfg))
    assert main(["experiment", str(cfg_path), "--out", str(out_csv), "--json", str(out_json)]) == EXIT_OK
    with open(out_csv) as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert len(rows) == 1 + 60
    summary = json.loads(out_json.read_text())
    assert [c["bound"] for c in summary["cells"]] == [3, 5, 3]
    assert summary["violations"] == 0
    under = [r for r in summary["rows"] if r["k"] == 5]
    assert all(r["krull_dim"] == 1 and r["respected"] for r in under)
    assert [r["seed"] for r in summary["rows"][:3]] == [100, 101, 102]


def test_experiment_empty(tmp_path, capsys):
    cfg_path, out_csv = tmp_path / "cfg.json", tmp_path / "rows.csv"
    cfg_path.write_text(json.dumps({"cells": [], "trials": 3}))
    assert main(["experiment", str(cfg_path), "--out", str(out_csv)]) == EXIT_OK
    assert out_csv.read_text().strip() == ",".join(CSV_COLUMNS)


def test_experiment_bad_config(tmp_path):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps({"cells": [{"m": 3, "n": 3, "r": 3, "k": 4}]}))
    assert main(["experiment", str(cfg_path)]) == EXIT_USAGE
    cfg_path.write_text(json.dumps({"cells": [], "bogus": 1}))
    assert main(["experiment", str(cfg_path)]) == EXIT_USAGE
