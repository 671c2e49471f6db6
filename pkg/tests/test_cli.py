import csv
import json
import subprocess
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest
import yaml

from fracspec.cli import main
from fracspec.config import ConfigError, dump_config, load_config, parse_config

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def _read_csv(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_config_round_trip(k):
    cfg = load_config(CONFIGS / f"experiment{k}.yaml")
    assert parse_config(yaml.safe_load(dump_config(cfg))) == cfg
    cfg2 = replace(cfg, solve_N=12)
    assert parse_config(yaml.safe_load(dump_config(cfg2))) == cfg2


def _raw(k=1):
    return yaml.safe_load((CONFIGS / f"experiment{k}.yaml").read_text())


@pytest.mark.parametrize(
    "mutate,key",
    [
        (lambda d: d["problem"].pop("alpha"), "problem.alpha"),
        (lambda d: d["problem"].update(alpha="big"), "problem.alpha"),
        (lambda d: d["study"].update(N_values=[]), "study.N_values"),
        (lambda d: d["study"].update(N_values=[8, 6]), "study.N_values"),
        (lambda d: d["output"].update(formats=["pdf"]), "output.formats"),
        (lambda d: d.update(colour="blue"), "colour"),
        (lambda d: d["problem"].update(f={"type": "wavelet"}), "problem.f"),
    ],
)
def test_config_errors_name_key(mutate, key):
    d = _raw()
    mutate(d)
    with pytest.raises(ConfigError, match=key.replace(".", r"\.")):
        parse_config(d)


def _write_cfg(tmp_path, d):
    p = tmp_path / "cfg.yaml"
    p.write_text(yaml.safe_dump(d))
    return p


def test_params_command(capsys):
    assert main(["params", "--alpha", "1.6", "--r", "0.2"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert round(out["beta"], 2) == 0.93
    assert len(out["lambda"]) == 6
    assert main(["params", "--alpha", "1.5", "--r", "0.5"]) == 0
    assert json.loads(capsys.readouterr().out)["beta"] == pytest.approx(0.75, abs=1e-13)


def test_params_beta_matches_independent_root():
    import mpmath as mp

    from fracspec.special_fn import solve_beta

    g = lambda b: mp.sin(mp.pi * b) / (mp.sin(mp.pi * (1.4 - b)) + mp.sin(mp.pi * b)) - 0.4
    assert solve_beta(1.4, 0.4) == pytest.approx(float(mp.findroot(g, 0.78)), abs=1e-12)


def test_params_domain_error(capsys):
    assert main(["params", "--alpha", "2.5", "--r", "0.2"]) == 1
    assert "alpha" in capsys.readouterr().err


def test_solve_writes_outputs(tmp_path):
    d = _raw(1)
    d["solve"] = {"N": 40}
    out = tmp_path / "out"
    assert main(["solve", "--config", str(_write_cfg(tmp_path, d)), "--out", str(out), "--format", "svg"]) == 0
    header, rows = _read_csv(out / "solution.csv")
    assert header == ["x", "u"] and len(rows) == 1001
    assert float(rows[0][1]) == 0.0 and float(rows[-1][1]) == 0.0
    sol = json.loads((out / "solution.json").read_text())
    assert len(sol["phi"]["coeffs"]) == 41
    assert (out / "solution.svg").read_text().startswith("<svg")


def test_experiment2_solution_skews_right(tmp_path):
    out = tmp_path / "o"
    assert main(["solve", "--config", str(CONFIGS / "experiment2.yaml"), "--out", str(out)]) == 0
    _, rows = _read_csv(out / "solution.csv")
    x = np.array([float(r[0]) for r in rows])
    u = np.array([float(r[1]) for r in rows])
    assert 0.5 < x[np.argmax(u)] < 1.0


def test_malformed_config_exit_1(tmp_path, capsys):
    d = _raw(1)
    del d["problem"]["r"]
    assert main(["solve", "--config", str(_write_cfg(tmp_path, d))]) == 1
    assert "problem.r" in capsys.readouterr().err
    bad = tmp_path / "bad.yaml"
    bad.write_text("problem: [unclosed")
    assert main(["converge", "--config", str(bad)]) == 1


def test_empty_n_values_exit_1(tmp_path, capsys):
    d = _raw(2)
    d["study"]["N_values"] = []
    assert main(["converge", "--config", str(_write_cfg(tmp_path, d))]) == 1
    assert "study.N_values" in capsys.readouterr().err


def test_unwritable_output_exit_1(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    cfg = str(CONFIGS / "experiment1.yaml")
    assert main(["solve", "--config", cfg, "--out", str(blocker / "sub")]) == 1


def test_solver_failure_exit_2(tmp_path, capsys):
    d = _raw(1)
    d["problem"]["c"] = {"type": "polynomial", "coeffs": [float("inf")]}
    assert main(["converge", "--config", str(_write_cfg(tmp_path, d)), "--out", str(tmp_path / "o")]) == 2
    assert "N=" in capsys.readouterr().err


def test_converge_experiment1_rates(tmp_path):
    out = tmp_path / "o"
    assert main(["converge", "--config", str(CONFIGS / "experiment1.yaml"), "--out", str(out)]) == 0
    header, rows = _read_csv(out / "convergence.csv")
    assert header == ["N", "e_L2", "kappa_L2", "e_H", "kappa_H"]
    kappa = [float(r[2]) for r in rows[1:5]]
    assert kappa == pytest.approx([4.97, 4.81, 4.77, 4.76], abs=0.1)
    assert rows[-1] == ["Pred.", "", "4.87", "", "4.07"]
    assert json.loads((out / "convergence.json").read_text())["name"] == "experiment1"


def test_converge_experiment3_error_peaks_at_jump(tmp_path):
    out = tmp_path / "o"
    assert main(["converge", "--config", str(CONFIGS / "experiment3.yaml"), "--out", str(out)]) == 0
    header, rows = _read_csv(out / "error_curves.csv")
    assert header[0] == "x" and header[1:] == [f"err_N{n}" for n in (12, 14, 16, 18, 20)]
    data = np.array(rows, dtype=float)
    for col in range(1, data.shape[1]):
        assert abs(data[np.argmax(np.abs(data[:, col])), 0] - 0.5) < 0.1
    assert (out / "error_curves.svg").exists()


def test_converge_is_byte_identical_on_rerun(tmp_path):
    out = tmp_path / "o"
    args = ["converge", "--config", str(CONFIGS / "experiment2.yaml"), "--out", str(out)]
    assert main(args) == 0
    first = {p.name: p.read_bytes() for p in out.iterdir()}
    assert main(args) == 0
    assert {p.name: p.read_bytes() for p in out.iterdir()} == first


def test_overrides(tmp_path):
    out = tmp_path / "o"
    args = ["converge", "--config", str(CONFIGS / "experiment1.yaml"), "--out", str(out)]
    assert main(args + ["--nodes", "300", "--nref", "36", "--format", "json"]) == 0
    d = json.loads((out / "convergence.json").read_text())
    assert d["settings"]["nodes"] == 300 and d["settings"]["N_ref"] == 36
    assert not (out / "convergence.csv").exists()


def test_console_script_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "fracspec.cli", "params", "--alpha", "1.7", "--r", "0.3"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert round(json.loads(proc.stdout)["beta"], 2) == 0.91
