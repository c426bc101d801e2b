import csv
import json
import subprocess
import sys

import pytest

from onebitboost.cli import main


def run(*args):
    return main([str(a) for a in args])


@pytest.fixture
def inst_path(tmp_path):
    path = tmp_path / "inst.mbcs"
    assert run("gen", "--dist", "gaussian", "--n", 20, "--p", 100, "--corrupt", 0, "--seed", 3, "--out", path) == 0
    return path


def test_gen_csv_and_binary_agree(tmp_path, inst_path):
    from onebitboost.io import load_instance

    run("gen", "--dist", "gaussian", "--n", 20, "--p", 100, "--seed", 3, "--out", tmp_path / "i.csv")
    a, b = load_instance(inst_path), load_instance(tmp_path / "i.csv")
    assert a.features.tobytes() == b.features.tobytes()


def test_fit_and_eval(tmp_path, inst_path, capsys):
    assert run("fit-lp", "--in", inst_path, "--out-model", tmp_path / "lp.json",
               "--out-certificate", tmp_path / "cert.csv") == 0
    assert "status=optimal" in capsys.readouterr().out
    rows = list(csv.reader(open(tmp_path / "cert.csv")))
    assert rows[0] == ["sample", "dual_weight"] and len(rows) == 1 + 20 + 3
    assert run("fit-adaboost", "--in", inst_path, "--epsilon", 0.2, "--iters", 300,
               "--out-model", tmp_path / "ab.json", "--out-trajectory", tmp_path / "traj.csv") == 0
    assert json.loads((tmp_path / "ab.json").read_text())["iterations"] == 300
    assert run("eval", "--in", inst_path, "--model", tmp_path / "lp.json", "--out", tmp_path / "ev.csv") == 0
    (row,) = csv.DictReader(open(tmp_path / "ev.csv"))
    assert row["prediction_error_method"] == "closed_form_gaussian"
    assert 0 <= float(row["prediction_error"]) <= 1


def test_iters_rule(tmp_path, inst_path, capsys):
    assert run("fit-adaboost", "--in", inst_path, "--epsilon", 0.5, "--iters-rule") == 0
    assert "iterations=" in capsys.readouterr().out


def test_usage_errors(tmp_path, inst_path):
    assert run() == 2
    assert run("gen", "--n", 5) == 2
    assert run("gen", "--n", 5, "--p", 3, "--s", 4, "--out", tmp_path / "x.csv") == 2
    assert run("fit-adaboost", "--in", inst_path) == 2
    assert run("fit-lp", "--in", tmp_path / "missing.mbcs") == 2
    assert run("experiment", "--plan", "nope", "--out", tmp_path / "r.csv") == 2
    assert run("plot", "--in", inst_path, "--panel", "figure9", "--out", tmp_path / "f.svg") == 2


def test_experiment_and_plot(tmp_path):
    plan = tmp_path / "p.plan"
    plan.write_text("name = cli\ndistributions = gaussian\nn_grid = 10, 20\nreplications = 2\n"
                    "iterations = 100\nmc_samples = 1000\n")
    out = tmp_path / "r.csv"
    assert run("experiment", "--plan", plan, "--out", out) == 0
    assert (tmp_path / "r_summary.csv").exists()
    assert run("plot", "--in", out, "--panel", "figure2-right", "--out", tmp_path / "f.svg") == 0
    assert (tmp_path / "f.svg").read_text().startswith("<svg")


def test_partial_failures_exit_3(tmp_path):
    plan = tmp_path / "p.plan"
    plan.write_text("name = bad\ndistributions = gaussian\nn_grid = 3, 10\ncorrupt_grid = 5\n"
                    "replications = 1\nestimators = lp\nmc_samples = 1000\n")
    assert run("experiment", "--plan", plan, "--out", tmp_path / "r.csv") == 3
    # a panel that selects no ok rows is a usage error
    assert run("plot", "--in", tmp_path / "r.csv", "--panel", "figure2-right", "--out", tmp_path / "f.svg") == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "onebitboost", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "experiment" in proc.stdout
