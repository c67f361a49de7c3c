import json

import pytest

from arcgraph.cli import DOMAIN_ERROR, INPUT_ERROR, OK, VIOLATION, dump, main
from arcgraph.surface import OrientedArc
from arcgraph.torus import punctured_torus, slope_coords
from arcgraph.unicorn import unicorn_path


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_builtin_file(capsys, tmp_path):
    path = tmp_path / "s11.json"
    path.write_text(json.dumps(punctured_torus().to_json()))
    code, out, _ = run(capsys, "validate", str(path))
    rep = json.loads(out)
    assert code == OK
    assert (rep["E"], rep["F"], rep["P"], rep["chi"], rep["genus"]) == (3, 2, 1, -1, 1)
    assert rep["config"]["file"] == str(path)


def test_validate_bad_inputs(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps([[0, 0, 0]]))
    assert run(capsys, "validate", str(bad))[0] == INPUT_ERROR
    assert run(capsys, "validate", str(tmp_path / "missing.json"))[0] == INPUT_ERROR


def test_unicorn_output_is_the_path_json(capsys):
    code, out, _ = run(capsys, "unicorn", "1/0", "1/3")
    assert code == OK
    T = punctured_torus().T
    P = unicorn_path(T, OrientedArc(slope_coords(1, 0)), OrientedArc(slope_coords(1, 3)))
    got = json.loads(out)
    assert dump(got["path"]) == dump(P.to_json())
    assert got["config"]["a"] == list(slope_coords(1, 0))


def test_unicorn_disjoint_and_same(capsys):
    code, out, _ = run(capsys, "unicorn", "0/1", "1/0")
    assert code == OK and len(json.loads(out)["path"]["vertices"]) == 2
    assert run(capsys, "unicorn", "2/3", "2/3")[0] == DOMAIN_ERROR


def test_unicorn_weights(capsys):
    code, out, _ = run(capsys, "unicorn", "--b-end", "1", "--", "-1,0,0", "0,-1,0")
    assert code == OK and len(json.loads(out)["path"]["vertices"]) == 2


def test_bad_seed_is_an_input_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["unicorn", "0/1", "1/0", "--seed", "-3"])
    assert exc.value.code == INPUT_ERROR


def test_suite_commands(capsys, tmp_path):
    code, out, err = run(capsys, "suite", "convergence", "--horizon", "8", "--seed", "17")
    rep = json.loads(out)
    assert code == OK and rep["pass"] and rep["config"]["seed"] == 17 and "pass" in err
    code, _, err = run(capsys, "suite", "bounds6-12", "--pairs", "3", "--height", "8", "--self-test")
    assert code == VIOLATION and "FAIL" in err
    target = tmp_path / "r.json"
    assert run(capsys, "suite", "gromov-gap", "--pairs", "20", "--height", "3", "--out", str(target))[0] == OK
    assert json.loads(target.read_text())["suite"] == "gromov-gap"


def test_graph_and_svg(capsys):
    code, out, _ = run(capsys, "graph", "--bound", "0")
    assert code == OK and out.splitlines()[0] == "source,target" and len(out.splitlines()) == 4
    code, out, _ = run(capsys, "svg", "--horizon", "5")
    assert code == OK and out.startswith("<svg")


def test_crossings(capsys):
    code, out, _ = run(capsys, "crossings", "1/0", "2/5")
    rows = out.splitlines()
    assert code == OK and rows[0] == "a_ordinal,b_ordinal,triangle" and len(rows) == 5
    assert [int(r.split(",")[0]) for r in rows[1:]] == [1, 2, 3, 4]


def test_experiment(capsys, tmp_path):
    cfg = tmp_path / "e.json"
    cfg.write_text(json.dumps({"a": "0/1", "b": "1/0", "f": "RL", "N": 8, "seed": 5}))
    csv = tmp_path / "e.csv"
    code, out, _ = run(capsys, "experiment", str(cfg), "--csv", str(csv))
    rep = json.loads(out)
    assert code == OK and all(rep["flags"].values()) and rep["config"]["seed"] == 5
    assert len(csv.read_text().splitlines()) == 10
    cfg.write_text(json.dumps({"a": "0/1", "b": "1/0", "f": "RL", "g": "LR", "N": 5}))
    assert run(capsys, "experiment", str(cfg))[0] == OK
    cfg.write_text(json.dumps({"a": "0/1"}))
    assert run(capsys, "experiment", str(cfg))[0] == INPUT_ERROR
    cfg.write_text(json.dumps({"a": "0/1", "b": "1/0", "f": "", "N": 5}))
    assert run(capsys, "experiment", str(cfg))[0] == DOMAIN_ERROR
