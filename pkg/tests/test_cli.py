import json

import pytest

from oscint import kernels
from oscint.cli import ExperimentConfig, read_config_file, run, ConfigError

# small instances of every subcommand; each must reproduce byte for byte
SMALL = {
    "eval": ["eval", "--lambda", "64", "--grid", "24", "--f", "trig"],
    "eval_general": ["eval", "--lambda", "64", "--grid", "24", "--phase", "general:1,0.5,-0.3,1.2"],
    "decay": ["decay", "--lmin", "4", "--lmax", "16"],
    "extremizer": ["extremizer", "--lmin", "64", "--lmax", "1024"],
    "rescale": ["verify", "rescale", "--K", "4", "--lambda", "64", "--grid", "16"],
    "jacobian": ["verify", "jacobian", "--K", "6", "--lambda", "64", "--nodes", "3"],
    "broadnarrow": ["verify", "broadnarrow", "--lambda", "64", "--grid", "24", "--alpha", "0.5",
                    "--lmin", "32", "--lmax", "64"],
    "capbound": ["verify", "capbound", "--K", "6"],
    "recursion": ["recursion", "--lmin", "32", "--lmax", "64"],
    "bench": ["bench", "--grid", "16"],
}


def _csvs(path):
    return {p.name: p.read_bytes() for p in sorted(path.glob("*.csv"))}


@pytest.mark.parametrize("name", sorted(SMALL))
def test_csv_identical_across_threads(name, tmp_path):
    outputs = []
    for n in (1, 2, 8):
        out = tmp_path / f"t{n}"
        assert run(SMALL[name] + ["--threads", str(n), "--out", str(out)]) == 0
        outputs.append(_csvs(out))
        summary = json.loads((out / "summary.json").read_text())
        assert set(summary) == {"command", "config", "results", "pass"}
        assert "threads" not in summary["config"]
    assert outputs[0] and outputs[0] == outputs[1] == outputs[2]


def test_threads_restored_after_run(tmp_path):
    before = kernels._threads
    run(SMALL["capbound"] + ["--threads", "2", "--out", str(tmp_path)])
    assert kernels._threads == before


def test_eval_csv_layout(tmp_path):
    assert run(["eval", "--lambda", "16", "--grid", "5", "--out", str(tmp_path)]) == 0
    lines = (tmp_path / "field.csv").read_text().splitlines()
    assert lines[0] == "x,y,re,im" and len(lines) == 26


def test_extremizer_csv_columns(tmp_path):
    run(SMALL["extremizer"] + ["--out", str(tmp_path)])
    head = (tmp_path / "extremizer.csv").read_text().splitlines()[0]
    assert head == "lambda,extremizer_lb,normalized,slope_running"


def test_decay_needs_three_lambdas(tmp_path):
    assert run(["decay", "--lmin", "64", "--lmax", "64", "--out", str(tmp_path)]) == 2


@pytest.mark.parametrize("argv", [
    ["eval", "--lambda", "-1"],
    ["decay", "--lmin", "48", "--lmax", "1024"],
    ["verify", "broadnarrow", "--alpha", "1.5"],
    ["eval", "--f", "nope"],
    ["eval", "--phase", "general:1,2,2,4"],
    ["frobnicate"],
    ["verify", "nothing"],
])
def test_configuration_errors_exit_2(argv, tmp_path):
    assert run(argv + ["--out", str(tmp_path)]) == 2


def test_failed_check_exits_1(tmp_path, monkeypatch):
    from oscint import suites
    row = {"K": 4, "j": 0, "k": 2, "F_norm_sq": 1.0, "bound": 0.1, "ratio": 10.0, "pass": False}
    monkeypatch.setattr(suites, "run_capbound", lambda K, f: ([row], False))
    assert run(["verify", "capbound", "--K", "4", "--out", str(tmp_path)]) == 1
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["pass"] is False and summary["results"]["failures"][0]["j"] == 0


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep\nlambda = 32\ngrid=6\nf = trig\n")
    assert read_config_file(cfg) == {"lam": 32.0, "grid": 6, "f": "trig"}
    out = tmp_path / "o"
    assert run(["eval", "--config", str(cfg), "--grid", "4", "--out", str(out)]) == 0
    conf = json.loads((out / "summary.json").read_text())["config"]
    assert conf["lam"] == 32.0 and conf["grid"] == 4 and conf["f"] == "trig"


def test_config_file_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    with pytest.raises(ConfigError):
        read_config_file(bad)
    assert run(["eval", "--config", str(bad), "--out", str(tmp_path)]) == 2


def test_defaults_validate():
    ExperimentConfig().validate("decay")
