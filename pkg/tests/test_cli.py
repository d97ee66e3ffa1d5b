import argparse

from pathlib import Path

import pytest
import ujson as json

from core.args import build_parser
from core.main import main


GOLDEN = Path(__file__).parent / "golden" / "cli_flags.txt"

SMALL_SWEEP = {
    "name": "cli",
    "d": 3,
    "p_grid": [10, 20, 30],
    "n_values": [20],
    "noise_levels": [0.5],
    "x_redraws": 2,
    "trials": 2,
    "seed": 3,
}


def _stdout_lines(capsys):
    return capsys.readouterr().out.splitlines()


def _flag_lines():
    parser = build_parser()
    lines = {f"hmmdd {opt}" for action in parser._actions for opt in action.option_strings}
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    for name, sub in subparsers.choices.items():
        lines |= {f"{name} {opt}" for action in sub._actions for opt in action.option_strings}
    return lines


def test_flags_match_golden_listing():
    expected = {line for line in GOLDEN.read_text().splitlines() if line.strip()}
    assert _flag_lines() == expected


def test_help_lists_every_flag():
    parser = build_parser()
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    for line in GOLDEN.read_text().splitlines():
        name, flag = line.split()
        sub = parser if name == "hmmdd" else subparsers.choices[name]
        assert flag in sub.format_help(), line


def test_version(capsys):
    assert main(["--version"]) == 0
    assert capsys.readouterr().out.startswith("hmmdd ")


def test_theory_prints_curve(capsys):
    assert main(["theory", "--gamma", "0.5", "--trace-eps", "1"]) == 0
    lines = _stdout_lines(capsys)
    assert lines[0] == "gamma,bias,variance,risk,tag"
    assert lines[1] == "0.5,0.0,1.0,1.0,"


def test_theory_threshold_row(capsys):
    assert main(["theory", "--gamma", "1.0,2.0"]) == 0
    lines = _stdout_lines(capsys)
    assert lines[1] == "1.0,,,inf,threshold"
    gamma, bias, variance, risk, tag = lines[2].split(",")
    assert (gamma, tag) == ("2.0", "")
    assert [float(bias), float(variance), float(risk)] == pytest.approx([0.5, 1.0, 1.5], rel=1e-8)


def test_config_precedence(tmp_path, capsys):
    config = tmp_path / "theory.json"
    config.write_text(json.dumps({"trace_sigma_eps": 2.0, "b_norm2": 3.0}))

    assert main(["theory", "--config", str(config), "--gamma", "0.5"]) == 0
    assert _stdout_lines(capsys)[1] == "0.5,0.0,2.0,2.0,"

    assert main(["theory", "--config", str(config), "--gamma", "0.5", "--trace-eps", "3"]) == 0
    assert _stdout_lines(capsys)[1] == "0.5,0.0,3.0,3.0,"

    argv = ["theory", "--config", str(config), "--gamma", "0.5", "--trace-eps", "3", "--set", "trace_sigma_eps=4"]
    assert main(argv) == 0
    assert _stdout_lines(capsys)[1] == "0.5,0.0,4.0,4.0,"


@pytest.mark.parametrize("argv", [
    ["frobnicate"],
    [],
    ["theory", "--format", "pdf"],
    ["theory", "--set", "novalue"],
    ["theory", "--set", "colour=blue"],
    ["theory", "--gamma", "0.5,-1"],
    ["theory", "--seed", "-1"],
    ["model", "--d", "3", "--p", "6", "--rho", "1.5"],
    ["empirical", "--set", "p_grid=[10,20]"],
    ["selfcheck", "--set", "seed=1"],
])
def test_usage_errors_exit_2(argv):
    assert main(argv) == 2


def test_config_errors(tmp_path):
    assert main(["theory", "--config", str(tmp_path / "missing.json")]) == 1

    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert main(["theory", "--config", str(broken)]) == 2

    listing = tmp_path / "list.json"
    listing.write_text("[1, 2]")
    assert main(["theory", "--config", str(listing)]) == 2


def test_theory_out(tmp_path):
    out = tmp_path / "theory"
    assert main(["theory", "--gamma", "0.5,1.0,2.0", "--out", str(out), "--seed", "9"]) == 0

    assert {"theory.csv", "theory.json", "theory.svg", "metadata.json"} <= {p.name for p in out.iterdir()}
    metadata = json.loads((out / "metadata.json").read_text())
    assert metadata["command"] == "theory"
    assert metadata["seed"] == 9
    assert metadata["config"]["gammas"] == [0.5, 1.0, 2.0]


def test_format_restricts_outputs(tmp_path):
    out = tmp_path / "theory"
    assert main(["theory", "--gamma", "0.5", "--out", str(out), "--format", "csv"]) == 0
    names = {p.name for p in out.iterdir()}
    assert "theory.csv" in names
    assert "theory.json" not in names and "theory.svg" not in names


def test_model_command(tmp_path, capsys):
    out = tmp_path / "model"
    assert main(["model", "--d", "3", "--p", "6", "--n", "20", "--seed", "4", "--out", str(out)]) == 0

    lines = _stdout_lines(capsys)
    assert lines[0] == "d: 3"
    assert lines[1] == "p: 6"
    assert any(line.startswith("regularity: ") for line in lines)
    expected = {"spec.json", "model.json", "assumption.json", "dataset.csv", "dataset.json", "metadata.json"}
    assert expected <= {p.name for p in out.iterdir()}
    assert json.loads((out / "spec.json").read_text())["seed"] == 4


def test_empirical_command(tmp_path, capsys):
    out = tmp_path / "empirical"
    argv = ["empirical", "--n", "40", "--p", "20", "--d", "3", "--noise", "0.5", "--trials", "3", "--redraws", "2", "--out", str(out)]
    assert main(argv) == 0

    lines = _stdout_lines(capsys)
    assert any(line.startswith("mean exact risk: ") for line in lines)
    assert any(line.startswith("theory: ") for line in lines)

    report = json.loads((out / "report.json").read_text())
    assert (report["n"], report["p"], report["gamma"]) == (40, 20, 0.5)
    assert len(report["draws"]) == 2
    # Tr(Σ_ε)·γ/(1 − γ) = 1.5
    assert report["theory"]["risk"] == pytest.approx(1.5)
    assert {"dataset.csv", "dataset.json", "metadata.json"} <= {p.name for p in out.iterdir()}


def test_empirical_ridge(capsys):
    assert main(["empirical", "--n", "30", "--p", "60", "--d", "2", "--lambda", "0.5"]) == 0
    assert any("ridge(lambda=0.5)" in line for line in _stdout_lines(capsys))


def test_sweep_outputs_are_reproducible(tmp_path, capsys):
    config = tmp_path / "sweep.json"
    config.write_text(json.dumps(SMALL_SWEEP))

    first, second = tmp_path / "first", tmp_path / "second"
    assert main(["sweep", "--config", str(config), "--out", str(first)]) == 0
    assert main(["sweep", "--config", str(config), "--out", str(second), "--set", "workers=2"]) == 0

    for name in ("sweep.csv", "sweep.svg"):
        assert (first / name).read_bytes() == (second / name).read_bytes()

    metadata = json.loads((first / "metadata.json").read_text())
    assert metadata["command"] == "sweep"
    assert metadata["config"]["name"] == "cli"
    assert list((first / "telemetry").glob("*.jsonl"))
    assert "noise=0.5,n=20: peak p=" in capsys.readouterr().out


def test_sweep_requires_a_grid(tmp_path):
    assert main(["sweep", "--out", str(tmp_path)]) == 2


def test_selfcheck(capsys):
    assert main(["selfcheck"]) == 0
    lines = _stdout_lines(capsys)
    assert len(lines) == 8
    assert all(line.startswith("PASS ") for line in lines)


@pytest.mark.slow
def test_figure2_command(tmp_path, capsys):
    out = tmp_path / "figure2"
    assert main(["figure2", "--out", str(out), "--workers", "4"]) == 0
    assert {"sweep.csv", "sweep.json", "sweep.svg", "metadata.json"} <= {p.name for p in out.iterdir()}
    assert len(_stdout_lines(capsys)) == 5
