import json
import os

import pytest

from maqaoa import read_state_dump
from maqaoa.cli import main


def test_generate(tmp_path, capsys):
    out = tmp_path / "runs"
    assert main(["generate", "--graphs", "star:n=4,count=2",
                 "--out", str(out)]) == 0
    names = sorted(os.listdir(out / "graphs"))
    assert "star4-0000.edges" in names and "star4-0001.json" in names
    assert "2 graphs" in capsys.readouterr().out


def test_optimize_single_graph(tmp_path, capsys):
    path = tmp_path / "p3.edges"
    path.write_text("0 1\n1 2\n")
    assert main(["optimize", "--graphs", str(path), "--ansatz", "ma",
                 "--seeds", "4"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["ansatz"] == "ma"
    assert record["c_max"] == 2
    assert record["ar"] > 0.99


def test_optimize_dump_state(tmp_path, capsys):
    path = tmp_path / "edge.edges"
    path.write_text("0 1\n")
    dump = tmp_path / "state.npy"
    assert main(["optimize", "--graphs", str(path), "--ansatz", "qaoa:1",
                 "--seeds", "3", "--backend", "statevector",
                 "--dump-state", str(dump)]) == 0
    state = read_state_dump(dump)
    assert state.shape == (4,)
    record = json.loads(capsys.readouterr().out)
    assert abs(record["state_expectation"] - record["best_value"]) < 1e-9


def test_sweep_and_reports(tmp_path, capsys):
    out = tmp_path / "runs"
    assert main(["sweep", "--graphs", "gnp:n=5,p=0.6,count=2",
                 "--ansatz", "qaoa:1", "--ansatz", "ma",
                 "--seeds", "3", "--out", str(out), "--master-seed", "3"]) == 0
    assert (out / "aggregate.csv").exists()
    capsys.readouterr()

    assert main(["report", "--table", "gap", "--out", str(out)]) == 0
    row = json.loads(capsys.readouterr().out)
    assert row["baseline"] == "qaoa:1" and row["improved"] == "ma"
    assert (out / "gap.csv").exists()

    assert main(["report", "--table", "distribution", "--out", str(out),
                 "--thresholds", "0.5,0.9,1.0"]) == 0
    assert (out / "distribution.csv").exists()

    # convergence without traces is an error surfaced as exit 1
    assert main(["report", "--table", "convergence", "--out", str(out)]) == 1
    assert "--traces" in capsys.readouterr().err


def test_fidelity(tmp_path, capsys):
    out = tmp_path / "runs"
    assert main(["fidelity", "--out", str(out)]) == 0
    assert (out / "fidelity.csv").exists()
    assert "ratio" in capsys.readouterr().out


def test_validate(capsys):
    assert main(["validate", "--trials", "3"]) == 0
    assert "validation passed" in capsys.readouterr().out


def test_out_dir_env_override(tmp_path, monkeypatch, capsys):
    env_out = tmp_path / "from_env"
    monkeypatch.setenv("MAQAOA_OUT", str(env_out))
    assert main(["fidelity", "--out", str(tmp_path / "ignored")]) == 0
    assert (env_out / "fidelity.csv").exists()
    assert not (tmp_path / "ignored").exists()


def test_errors_exit_nonzero(tmp_path, capsys):
    assert main(["generate", "--graphs", "ring:n=5", "--out", str(tmp_path)]) == 1
    assert capsys.readouterr().err.startswith("error:")
    assert main(["optimize", "--graphs", str(tmp_path / "missing.edges")]) == 1
    with pytest.raises(SystemExit):
        main(["no-such-verb"])
